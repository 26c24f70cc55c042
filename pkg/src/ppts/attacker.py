"""Procedural simulated attacks on sanitized text.

Two levels: literal detection scans the text with the attacker's own
gazetteers; logical inference derives values from residual contextual clues
via a clue knowledge base. Both are deterministic functions of the text and
the attacker's knowledge. An attacker never sees ground truth, so it cannot
judge its own success; the evaluation harness intersects the recovered values
with the annotations afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from .sanitizer import ClueKB, DetectorConfig, PrivacyType, detect_spans, normalize_value
from .textmatch import token_pattern

LEVELS = ("literal", "inference")


@dataclass(frozen=True)
class AttackResult:
    example_id: str
    level: str
    recovered_values: frozenset[tuple[str, str]] = field(default_factory=frozenset)
    success: bool = False


def literal_attack(
    sanitized: str,
    types: Sequence[PrivacyType],
    attacker_gazetteers: Mapping[str, Sequence[DetectorConfig]],
    example_id: str = "",
) -> AttackResult:
    """Collect every whole-token gazetteer hit as a (value, type) pair.

    Surrogates get "recovered" too; only intersection with ground truth counts
    as success, and that judgement belongs to the harness.
    """
    recovered: set[tuple[str, str]] = set()
    for ptype in types:
        for cfg in attacker_gazetteers.get(ptype.name, ()):
            for span in detect_spans(sanitized, ptype, cfg):
                recovered.add((span.surface, ptype.name))
    return AttackResult(example_id=example_id, level="literal", recovered_values=frozenset(recovered))


def inference_attack(
    sanitized: str,
    types: Sequence[PrivacyType],
    kb: ClueKB,
    example_id: str = "",
) -> AttackResult:
    """Derive values from clue terms still present in the sanitized text."""
    names = {t.name for t in types}
    recovered: set[tuple[str, str]] = set()
    for rule in kb:
        if rule.ptype not in names:
            continue
        if token_pattern(rule.clue_term).search(sanitized):
            recovered.add((rule.implied_value, rule.ptype))
    return AttackResult(example_id=example_id, level="inference", recovered_values=frozenset(recovered))


def judge(result: AttackResult, ground_truth: Mapping[str, Sequence[str]]) -> AttackResult:
    """Mark an attack successful when it recovered any true value.

    Harness-side: intersects the attacker's (value, type) pairs with the
    example's annotations, comparing values after normalization.
    """
    truth = {
        (normalize_value(v), tname)
        for tname, values in ground_truth.items()
        for v in values
    }
    hit = any((normalize_value(v), t) in truth for v, t in result.recovered_values)
    return replace(result, success=hit)


def llm_attack(
    sanitized: str,
    types: Sequence[PrivacyType],
    completer: Callable[[str], str],
    example_id: str = "",
    level: str = "inference",
) -> AttackResult:
    """Adapter for a generative attacker behind the same interface.

    The completer receives an extraction prompt and must answer one
    "value<TAB>type" pair per line. Excluded from CI against real backends.
    """
    wanted = ", ".join(t.name for t in types)
    prompt = (
        f"Identify or infer every private value of type(s) {wanted} "
        f"in the following text. Answer one value<TAB>type per line.\n\n{sanitized}"
    )
    recovered: set[tuple[str, str]] = set()
    names = {t.name for t in types}
    for line in completer(prompt).splitlines():
        if "\t" not in line:
            continue
        value, _, tname = line.partition("\t")
        if value.strip() and tname.strip() in names:
            recovered.add((value.strip(), tname.strip()))
    return AttackResult(example_id=example_id, level=level, recovered_values=frozenset(recovered))
