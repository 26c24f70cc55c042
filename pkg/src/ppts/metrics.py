"""Privacy/utility metrics and corpus-level evaluation.

Three aggregates quantify a run over an annotated corpus: the privacy removal
rate (share of annotated private values no longer present in the transmitted
text), the data utility rate (share of examples whose recovered answer matches
the expected information), and the data protection rate at each attack level
(share of examples that are both useful and attack-resistant). The evaluate
pipeline runs sanitize → complete → recover per example and aggregates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .attacker import AttackResult, inference_attack, judge, literal_attack
from .errors import BackendTimeoutError, TransportError, UsageError
from .llm import BackendConfig, ChatMessage, complete
from .recovery import recover
from .sanitizer import (
    ClueKB,
    DetectorConfig,
    PrivacyType,
    SanitizerConfig,
    SurrogateMap,
    normalize_value,
    sanitize,
)
from .textmatch import contains_token


def normalize(text: str) -> str:
    """Answer normalization: lowercase, collapse whitespace, strip terminal punctuation."""
    return normalize_value(text)


@dataclass
class AnnotatedExample:
    """One corpus item: a text, its private values per type, and the expected answer."""

    id: str
    text: str
    privacy: dict[str, list[str]]
    expected_info: str
    task_prompt: str = ""

    def __post_init__(self):
        if not self.expected_info:
            raise UsageError(f"example {self.id}: expected_info must be non-empty")
        for tname, values in self.privacy.items():
            for value in values:
                if not contains_token(self.text, value):
                    raise UsageError(
                        f"example {self.id}: value {value!r} ({tname}) not present in text"
                    )

    def request(self) -> str:
        """The model request: text with the task prompt appended."""
        return f"{self.text}\n{self.task_prompt}" if self.task_prompt else self.text


@dataclass
class PerExampleRow:
    id: str
    retained_values: list[tuple[str, str]]  # (type, value) still present after sanitization
    utility_hit: bool
    attack_literal_success: bool
    attack_inference_success: bool


@dataclass
class EvaluationReport:
    prr: float
    dur: float
    dpr_literal: float
    dpr_inference: float
    per_example: list[PerExampleRow] = field(default_factory=list)

    def validate(self) -> "EvaluationReport":
        for name in ("prr", "dur", "dpr_literal", "dpr_inference"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise UsageError(f"{name} out of range: {value}")
        if self.dpr_literal > self.dur or self.dpr_inference > self.dur:
            raise UsageError("protection rate cannot exceed utility rate")
        return self

    def to_dict(self) -> dict:
        return {
            "prr": self.prr,
            "dur": self.dur,
            "dpr_literal": self.dpr_literal,
            "dpr_inference": self.dpr_inference,
            "per_example": [
                {
                    "id": row.id,
                    "retained_values": [list(pair) for pair in row.retained_values],
                    "utility_hit": row.utility_hit,
                    "attack_literal_success": row.attack_literal_success,
                    "attack_inference_success": row.attack_inference_success,
                }
                for row in self.per_example
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    def render_table(self) -> str:
        lines = [
            f"{'PRR':>14}  {self.prr:6.4f}",
            f"{'DUR':>14}  {self.dur:6.4f}",
            f"{'DPR literal':>14}  {self.dpr_literal:6.4f}",
            f"{'DPR inference':>14}  {self.dpr_inference:6.4f}",
            "",
            f"{'id':<12} {'utility':<8} {'literal':<8} {'inference':<10} retained",
        ]
        for row in self.per_example:
            retained = ", ".join(f"{t}:{v}" for t, v in row.retained_values) or "-"
            lines.append(
                f"{row.id:<12} {str(row.utility_hit):<8} {str(row.attack_literal_success):<8} "
                f"{str(row.attack_inference_success):<10} {retained}"
            )
        return "\n".join(lines)


def compute_prr(corpus: Sequence[AnnotatedExample], sanitized: Sequence[str]) -> float:
    """Share of annotated private values removed from the sanitized texts.

    Counts distinct values per (example, type); presence is a whole-token,
    case-insensitive match. An empty denominator scores 1.0 (nothing to remove).
    """
    if len(corpus) != len(sanitized):
        raise UsageError("corpus and sanitized lists must have equal length")
    total = 0
    retained = 0
    for example, text in zip(corpus, sanitized):
        for values in example.privacy.values():
            distinct: dict[str, str] = {}
            for v in values:
                distinct.setdefault(v.casefold(), v)
            total += len(distinct)
            retained += sum(1 for v in distinct.values() if contains_token(text, v))
    if total == 0:
        return 1.0
    return 1.0 - retained / total


def compute_dur(expected: Sequence[str], obtained: Sequence[str]) -> float:
    """Share of answers that match the expected information after normalization."""
    if len(expected) != len(obtained):
        raise UsageError("expected and obtained lists must have equal length")
    if not expected:
        return 1.0
    hits = sum(1 for e, o in zip(expected, obtained) if normalize(e) == normalize(o))
    return hits / len(expected)


def compute_dpr(utility_hits: Sequence[bool], attack_successes: Sequence[bool]) -> float:
    """Share of examples that are both useful and attack-resistant."""
    if len(utility_hits) != len(attack_successes):
        raise UsageError("utility and attack lists must have equal length")
    if not utility_hits:
        return 1.0
    protected = sum(1 for hit, attacked in zip(utility_hits, attack_successes) if hit and not attacked)
    return protected / len(utility_hits)


@dataclass
class DefenderSetup:
    """Everything the sanitizing side needs for one evaluation run."""

    types: list[PrivacyType]
    config: SanitizerConfig
    kb: ClueKB
    seed: int = 42
    max_retries: int = 3
    enabled: bool = True
    reasonability: bool = True


@dataclass
class AttackerSetup:
    """The attacker's knowledge: its own gazetteers and clue rules."""

    gazetteers: dict[str, list[DetectorConfig]]
    kb: ClueKB


def evaluate(
    corpus: Sequence[AnnotatedExample],
    defender: DefenderSetup,
    backend: BackendConfig,
    attacker: AttackerSetup,
) -> EvaluationReport:
    """Run the sanitize → complete → recover pipeline over a corpus and score it.

    Backend failures count as utility misses for the affected example; they
    never abort the run.
    """
    sanitized_texts: list[str] = []
    expected: list[str] = []
    obtained: list[str] = []
    utility_hits: list[bool] = []
    literal_successes: list[bool] = []
    inference_successes: list[bool] = []
    rows: list[PerExampleRow] = []

    for example in corpus:
        request = example.request()
        if defender.enabled:
            outcome = sanitize(
                request,
                defender.types,
                defender.config,
                defender.kb,
                defender.seed,
                defender.max_retries,
                reasonability=defender.reasonability,
            )
            transmitted, mapping = outcome.sanitized, outcome.mapping
        else:
            transmitted, mapping = request, SurrogateMap()
        sanitized_texts.append(transmitted)

        try:
            reply = complete([ChatMessage("user", transmitted)], backend)
            answer = recover(reply, mapping).text
        except (TransportError, BackendTimeoutError):
            answer = ""
        expected.append(example.expected_info)
        obtained.append(answer)
        hit = normalize(example.expected_info) == normalize(answer)
        utility_hits.append(hit)

        literal = judge(
            literal_attack(transmitted, defender.types, attacker.gazetteers, example.id),
            example.privacy,
        )
        inference = judge(
            inference_attack(transmitted, defender.types, attacker.kb, example.id),
            example.privacy,
        )
        literal_successes.append(literal.success)
        inference_successes.append(inference.success)

        retained = [
            (tname, value)
            for tname, values in example.privacy.items()
            for value in values
            if contains_token(transmitted, value)
        ]
        rows.append(
            PerExampleRow(
                id=example.id,
                retained_values=retained,
                utility_hit=hit,
                attack_literal_success=literal.success,
                attack_inference_success=inference.success,
            )
        )

    report = EvaluationReport(
        prr=compute_prr(corpus, sanitized_texts),
        dur=compute_dur(expected, obtained),
        dpr_literal=compute_dpr(utility_hits, literal_successes),
        dpr_inference=compute_dpr(utility_hits, inference_successes),
        per_example=rows,
    )
    return report.validate()


def attack_only(
    corpus: Sequence[AnnotatedExample],
    sanitized: Sequence[str],
    level: str,
    attacker: AttackerSetup,
    types: Sequence[PrivacyType],
) -> list[AttackResult]:
    """Run one attack level over pre-sanitized texts and judge against truth."""
    if len(corpus) != len(sanitized):
        raise UsageError("corpus and sanitized lists must have equal length")
    results = []
    for example, text in zip(corpus, sanitized):
        if level == "literal":
            result = literal_attack(text, types, attacker.gazetteers, example.id)
        elif level == "inference":
            result = inference_attack(text, types, attacker.kb, example.id)
        else:
            raise UsageError(f"unknown attack level {level!r}")
        results.append(judge(result, example.privacy))
    return results


# --- corpus file I/O -----------------------------------------------------------

def read_corpus(path: str | Path) -> list[AnnotatedExample]:
    """Read line-delimited JSON records with id, text, privacy, expected_info, task_prompt."""
    examples = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            examples.append(
                AnnotatedExample(
                    id=record["id"],
                    text=record["text"],
                    privacy={k: list(v) for k, v in record["privacy"].items()},
                    expected_info=record["expected_info"],
                    task_prompt=record.get("task_prompt", ""),
                )
            )
        except (ValueError, KeyError) as exc:
            raise UsageError(f"{path}:{lineno}: bad corpus record: {exc}") from exc
    return examples


def write_corpus(examples: Sequence[AnnotatedExample], path: str | Path) -> None:
    lines = [
        json.dumps(
            {
                "id": e.id,
                "text": e.text,
                "privacy": e.privacy,
                "expected_info": e.expected_info,
                "task_prompt": e.task_prompt,
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        for e in examples
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
