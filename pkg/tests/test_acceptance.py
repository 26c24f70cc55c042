"""Acceptance criteria, one test per criterion with a printed pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

from __future__ import annotations

import json
import time

import pytest

from ppts.corpus import (
    default_attacker,
    default_defender,
    extraction_backend,
    generate_corpus,
)
from ppts.gateway import Gateway, GatewayConfig
from ppts.llm import BackendConfig, ChatMessage
from ppts.metrics import evaluate
from ppts.recovery import recover
from ppts.sanitizer import (
    ClueKB,
    ClueRule,
    DetectorConfig,
    SanitizerConfig,
    is_placeholder,
    privacy_types,
    sanitize,
)
from ppts.textmatch import contains_token


def _report(number: int, description: str, ok: bool):
    print(f"[criterion {number}] {'PASS' if ok else 'FAIL'} — {description}")
    assert ok, f"criterion {number} failed: {description}"


def _corpus_200():
    return generate_corpus(200, seed=1234, clue_fraction=0.3)


def test_criterion_1_round_trip_identity():
    corpus = _corpus_200()
    defender = default_defender()
    echo = BackendConfig(kind="mock-echo")
    from ppts.llm import complete

    started = time.perf_counter()
    total = fixed = exact = 0
    for example in corpus:
        request = example.request()
        outcome = sanitize(
            request, defender.types, defender.config, defender.kb,
            defender.seed, defender.max_retries,
        )
        reply = complete([ChatMessage("user", outcome.sanitized)], echo)
        restored = recover(reply, outcome.mapping).text
        if outcome.fixes_applied:
            fixed += 1
            continue
        total += 1
        if restored == request:
            exact += 1
    elapsed = time.perf_counter() - started
    ok = total > 0 and exact == total and elapsed < 5.0
    _report(
        1,
        f"round trip identity on {total} fix-free of 200 examples "
        f"({exact}/{total} exact, {fixed} with fixes, {elapsed:.2f}s < 5s)",
        ok,
    )


def test_criterion_2_non_leakage_prr_ceiling():
    corpus = _corpus_200()
    report = evaluate(corpus, default_defender(), BackendConfig(kind="mock-echo"),
                      default_attacker())
    _report(2, f"complete-gazetteer sanitization reaches PRR == 1.0 (got {report.prr})",
            report.prr == 1.0)


def test_criterion_3_metric_oracle_equivalence():
    from ppts.metrics import AnnotatedExample, compute_dpr, compute_dur, compute_prr

    corpus = [
        AnnotatedExample("m-0", "Tom and Alice in Paris",
                         {"name": ["Tom", "Alice"], "location": ["Paris"]}, "x"),
        AnnotatedExample("m-1", "Bob in Berlin", {"name": ["Bob"], "location": ["Berlin"]}, "x"),
        AnnotatedExample("m-2", "Carol in Rome", {"name": ["Carol"], "location": ["Rome"]}, "x"),
        AnnotatedExample("m-3", "David in Tokyo", {"name": ["David"], "location": ["Tokyo"]}, "x"),
        AnnotatedExample("m-4", "Emma here", {"name": ["Emma"]}, "x"),
        AnnotatedExample("m-5", "Frank in Cairo", {"name": ["Frank"], "location": ["Cairo"]}, "x"),
        AnnotatedExample("m-6", "Grace in Moscow", {"name": ["Grace"], "location": ["Moscow"]}, "x"),
        AnnotatedExample("m-7", "Henry in Sydney", {"name": ["Henry"], "location": ["Sydney"]}, "x"),
        AnnotatedExample("m-8", "Irene in Lagos", {"name": ["Irene"], "location": ["Lagos"]}, "x"),
        AnnotatedExample("m-9", "Noah in Hanoi", {"name": ["Noah"], "location": ["Hanoi"]}, "x"),
    ]
    sanitized = ["X and Y in Z", "Bob in Q", "W in Rome", "K in L", "M here",
                 "F in C", "G in M", "H in S", "I in L", "N in H"]

    # independent brute-force recomputation, written from the definitions
    total = retained = 0
    for example, text in zip(corpus, sanitized):
        for values in example.privacy.values():
            distinct = {v.casefold() for v in values}
            total += len(distinct)
            for v in distinct:
                padded = f" {text.casefold()} "
                if any(
                    padded[i: i + len(v)] == v
                    and not padded[i - 1].isalnum()
                    and not padded[i + len(v)].isalnum()
                    for i in range(1, len(padded) - len(v))
                ):
                    retained += 1
    brute_prr = 1 - retained / total

    prr = compute_prr(corpus, sanitized)
    prr_fixture = compute_prr(
        corpus[:5],
        ["X and Y in Z", "Bob in Q", "W in Rome", "K in L", "M here"],
    )

    expected = ["a", "b", "c", "d"]
    obtained = ["a", "b", "c", "x"]
    dur = compute_dur(expected, obtained)
    brute_dur = sum(e == o for e, o in zip(expected, obtained)) / len(expected)

    hits = [True, True, False, True]
    attacks = [False, True, False, False]
    dpr = compute_dpr(hits, attacks)
    brute_dpr = sum(1 for h, a in zip(hits, attacks) if h and not a) / len(hits)

    ok = (prr == brute_prr and prr_fixture == 0.8 and dur == brute_dur == 0.75
          and dpr == brute_dpr == 0.5)
    _report(3, f"metric aggregates equal brute-force recomputation "
               f"(prr {prr} == {brute_prr}, fixture 0.8; dur {dur}; dpr {dpr})", ok)


def test_criterion_4_reasonability_ablation_direction():
    corpus = generate_corpus(50, seed=77, clue_fraction=0.5)
    with_check = evaluate(corpus, default_defender(reasonability=True),
                          extraction_backend(), default_attacker())
    without = evaluate(corpus, default_defender(reasonability=False),
                       extraction_backend(), default_attacker())
    ok = with_check.dpr_inference > without.dpr_inference
    _report(4, f"inference DPR with consistency check ({with_check.dpr_inference:.3f}) "
               f"strictly exceeds without ({without.dpr_inference:.3f})", ok)


def test_criterion_5_no_filter_baseline_floor():
    corpus = generate_corpus(50, seed=88, clue_fraction=0.2)
    report = evaluate(corpus, default_defender(enabled=False),
                      extraction_backend(), default_attacker())
    ok = report.dpr_literal == 0.0 and report.prr == 0.0
    _report(5, f"disabled filter floors literal DPR at 0.0 (got {report.dpr_literal}) "
               f"with PRR {report.prr}", ok)


def test_criterion_6_protection_never_exceeds_utility():
    checked = 0
    for fraction in (0.0, 0.3, 1.0):
        corpus = generate_corpus(20, seed=100 + int(fraction * 10), clue_fraction=fraction)
        for kwargs in ({}, {"reasonability": False}, {"enabled": False}):
            report = evaluate(corpus, default_defender(**kwargs),
                              extraction_backend(), default_attacker())
            assert report.dpr_literal <= report.dur
            assert report.dpr_inference <= report.dur
            checked += 1
    _report(6, f"DPR ≤ DUR held on all {checked} evaluated corpora "
               "(also asserted inside every report)", True)


def test_criterion_7_eval_determinism():
    corpus = generate_corpus(40, seed=4242, clue_fraction=0.4)
    a = evaluate(corpus, default_defender(seed=42), extraction_backend(), default_attacker())
    b = evaluate(corpus, default_defender(seed=42), extraction_backend(), default_attacker())
    ok = a.to_json().encode() == b.to_json().encode()
    _report(7, "two eval runs with one seed produce byte-identical reports", ok)


def test_criterion_8_termination_bound_on_unfixable_fixture(write_wordlist):
    types = privacy_types(["location"])
    loc_t = types[0]
    config = SanitizerConfig(
        detectors={"location": [
            DetectorConfig("gazetteer", write_wordlist("adv.txt", ["Paris"]), loc_t)
        ]},
        pools={"location": ["London"]},
    )
    kb = ClueKB([ClueRule("the Eiffel Tower", "Paris", "location", None)])
    text = "I moved to Paris but I still see the Eiffel Tower daily"
    max_retries = 3

    started = time.perf_counter()
    outcome = sanitize(text, types, config, kb, seed=5, max_retries=max_retries)
    elapsed = time.perf_counter() - started

    passes = sum(1 + r for r in outcome.retries_used.values())
    ok = (
        elapsed < 1.0
        and passes <= len(types) * (1 + max_retries)
        and any(is_placeholder(e.ciphertext) for e in outcome.mapping)
        and "⟨LOCATION-0⟩" in outcome.sanitized
        and not contains_token(outcome.sanitized, "Paris")
    )
    _report(8, f"unfixable fixture terminated in {passes} passes "
               f"(bound {len(types) * (1 + max_retries)}) in {elapsed * 1000:.0f}ms "
               "and emitted placeholders", ok)


def test_criterion_9_gateway_upstream_cleanliness_and_isolation():
    class Capture:
        def __init__(self):
            self.bodies: list[str] = []

        def __call__(self, messages, cfg):
            self.bodies.extend(m.content for m in messages)
            return messages[-1].content

    config = GatewayConfig.default()
    config.store_path = ":memory:"
    capture = Capture()
    gateway = Gateway(config, completer=capture)

    scripts = {
        "a": ["Tom is in Paris", "Paris again for Tom", "Alice joins Tom in Paris",
              "Bob stays in Berlin", "Emma flies to Rome", "Tom leaves Paris",
              "back to Berlin says Bob"],
        "b": ["Alice is in Rome", "Rome suits Alice", "Carol visits Tokyo",
              "David in Cairo", "Alice leaves Rome", "Tokyo welcomes Carol"],
        "c": ["Henry in Sydney", "Grace in Moscow", "Henry loves Sydney",
              "Moscow again for Grace", "Irene lands in Lagos",
              "Noah naps in Hanoi", "Henry still in Sydney"],
    }
    truths = ["Tom", "Alice", "Bob", "Carol", "David", "Emma", "Grace", "Henry",
              "Irene", "Noah", "Paris", "Berlin", "Rome", "Tokyo", "Cairo",
              "Moscow", "Sydney", "Lagos", "Hanoi"]

    sessions = {key: gateway.create_session(["name", "location"]) for key in scripts}
    turns = 0
    consistent = True
    for key, lines in scripts.items():
        seen: dict[str, str] = {}
        for line in lines:
            gateway.handle_chat(sessions[key].id, [ChatMessage("user", line)])
            turns += 1
            mapping = gateway.get_mapping(sessions[key].id)
            for entry in mapping:
                if entry.plaintext in seen and seen[entry.plaintext] != entry.ciphertext:
                    consistent = False
                seen[entry.plaintext] = entry.ciphertext

    leaked = [
        value for body in capture.bodies for value in truths if contains_token(body, value)
    ]
    map_a = gateway.get_mapping(sessions["a"].id)
    map_b = gateway.get_mapping(sessions["b"].id)
    isolated = (
        map_a.ciphertext_for("Carol") is None
        and map_b.ciphertext_for("Tom") is None
        and map_b.ciphertext_for("Berlin") is None
    )
    audits_ok = all(
        len(gateway.get_audit(sessions[k].id)) == len(scripts[k]) for k in scripts
    )
    ok = turns == 20 and not leaked and isolated and consistent and audits_ok
    _report(9, f"{turns}-turn multi-session script: zero ground-truth values in "
               f"{len(capture.bodies)} transmitted bodies, maps isolated, "
               "surrogates consistent per session", ok)
