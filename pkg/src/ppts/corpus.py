"""Synthetic annotated corpus generation and the packaged default environment.

The generator composes sentences from shipped lexicons (person names and
cities) so the matching gazetteers are complete by construction: every
annotated value is guaranteed to be detectable. A configurable share of
examples carries a landmark clue that implies the true city, which is what
the reasonability check and the inference attacker feed on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import UsageError
from .llm import BackendConfig, ExtractionRule
from .metrics import AnnotatedExample, AttackerSetup, DefenderSetup
from .sanitizer import (
    ClueKB,
    DetectorConfig,
    PrivacyType,
    SanitizerConfig,
    load_wordlist,
    privacy_types,
)

DEFAULT_TYPES = ("name", "location")

EXTRACTION_RULES: tuple[ExtractionRule, ...] = (
    ExtractionRule("subject-of-visited", r"who visited", r"^(.+?)\s+visited\b"),
    ExtractionRule("destination-city", r"which city was the destination",
                   r"travelled to\s+(.+?)(?=\s+and\b|[.,!?\n])"),
    ExtractionRule("object-of-met", r"who was met", r"\bmet\s+(.+?)\s+in\b"),
    ExtractionRule("subject-of-lives", r"who lives there", r"^(.+?)\s+lives\b"),
)


def data_path(name: str) -> Path:
    """Path of a packaged data file."""
    return Path(str(resources.files("ppts").joinpath("data", name)))


def default_types() -> list[PrivacyType]:
    return privacy_types(list(DEFAULT_TYPES))


def default_sanitizer_config(types: list[PrivacyType] | None = None) -> SanitizerConfig:
    """Detector and pool wiring over the packaged gazetteers."""
    types = types or default_types()
    by_name = {t.name: t for t in types}
    detectors: dict[str, list[DetectorConfig]] = {}
    pools: dict[str, list[str]] = {}
    if "name" in by_name:
        detectors["name"] = [DetectorConfig("gazetteer", data_path("names.txt"), by_name["name"])]
        pools["name"] = load_wordlist(data_path("name_pool.txt"))
    if "location" in by_name:
        detectors["location"] = [
            DetectorConfig("gazetteer", data_path("locations.txt"), by_name["location"])
        ]
        pools["location"] = load_wordlist(data_path("location_pool.txt"))
    return SanitizerConfig(detectors=detectors, pools=pools)


def default_clue_kb() -> ClueKB:
    return ClueKB.load(data_path("clues.tsv"))


def default_defender(seed: int = 42, max_retries: int = 3, *,
                     enabled: bool = True, reasonability: bool = True) -> DefenderSetup:
    types = default_types()
    return DefenderSetup(
        types=types,
        config=default_sanitizer_config(types),
        kb=default_clue_kb(),
        seed=seed,
        max_retries=max_retries,
        enabled=enabled,
        reasonability=reasonability,
    )


def default_attacker() -> AttackerSetup:
    """Attacker holding the same knowledge files as the defender (worst case)."""
    types = default_types()
    by_name = {t.name: t for t in types}
    gazetteers = {
        "name": [DetectorConfig("gazetteer", data_path("names.txt"), by_name["name"])],
        "location": [DetectorConfig("gazetteer", data_path("locations.txt"), by_name["location"])],
    }
    return AttackerSetup(gazetteers=gazetteers, kb=default_clue_kb())


def extraction_backend() -> BackendConfig:
    return BackendConfig(kind="mock-extract", extract_rules=EXTRACTION_RULES)


@dataclass(frozen=True)
class _Template:
    text: str
    prompt: str
    expected: str  # which field is the expected answer
    needs_clue: bool = False


_TEMPLATES = (
    _Template("{name} visited {location} last Friday.", "Q: who visited?", "name"),
    _Template("{name} travelled to {location} and stayed for a week.",
              "Q: which city was the destination?", "location"),
    _Template("{name} met {name2} in {location} yesterday.", "Q: who was met?", "name2"),
    _Template("{name} lives in {location} now.", "Q: who lives there?", "name"),
)

_CLUE_TEMPLATES = (
    _Template("{name} travelled to {location} and had dinner near {clue}.",
              "Q: which city was the destination?", "location", needs_clue=True),
    _Template("{name} lives in {location} and can see {clue} from home.",
              "Q: who lives there?", "name", needs_clue=True),
)


def generate_corpus(
    n: int,
    seed: int = 0,
    clue_fraction: float = 0.0,
) -> list[AnnotatedExample]:
    """Generate n annotated examples from the packaged lexicons.

    `clue_fraction` of the examples mention a landmark implying their true
    city. Deterministic for a given (n, seed, clue_fraction).
    """
    if not 0.0 <= clue_fraction <= 1.0:
        raise UsageError("clue_fraction must be within [0, 1]")
    names = load_wordlist(data_path("names.txt"))
    cities = load_wordlist(data_path("locations.txt"))
    kb = default_clue_kb()
    landmarks = [(r.clue_term, r.implied_value) for r in kb if r.ptype == "location"]

    rng = random.Random(seed)
    examples = []
    for i in range(n):
        use_clue = bool(landmarks) and rng.random() < clue_fraction
        if use_clue:
            template = rng.choice(_CLUE_TEMPLATES)
            clue, city = rng.choice(landmarks)
        else:
            template = rng.choice(_TEMPLATES)
            clue, city = "", rng.choice(cities)
        name = rng.choice(names)
        name2 = rng.choice([c for c in names if c != name])
        fields = {"name": name, "name2": name2, "location": city, "clue": clue}
        text = template.text.format(**fields)
        privacy = {
            "name": [name, name2] if "{name2}" in template.text else [name],
            "location": [city],
        }
        examples.append(
            AnnotatedExample(
                id=f"ex-{i:04d}",
                text=text,
                privacy=privacy,
                expected_info=fields[template.expected],
                task_prompt=template.prompt,
            )
        )
    return examples
