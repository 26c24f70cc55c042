"""Shared fixtures: scratch resource files and a small controlled environment."""

from __future__ import annotations

import pytest

from ppts.sanitizer import (
    ClueKB,
    ClueRule,
    DetectorConfig,
    SanitizerConfig,
    privacy_types,
)
from ppts.textmatch import resolve_overlaps, token_pattern


@pytest.fixture
def write_wordlist(tmp_path):
    def _write(name: str, values: list[str]):
        path = tmp_path / name
        path.write_text("\n".join(values) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.fixture
def two_types():
    return privacy_types(["name", "location"])


@pytest.fixture
def small_env(write_wordlist, two_types):
    """A fully controlled defender: tiny gazetteers, pools, and clue KB."""
    name_t, loc_t = two_types
    names = write_wordlist("names.txt", ["Tom", "Alice", "Bob"])
    cities = write_wordlist("cities.txt", ["Paris", "Berlin", "Rome"])
    config = SanitizerConfig(
        detectors={
            "name": [DetectorConfig("gazetteer", names, name_t)],
            "location": [DetectorConfig("gazetteer", cities, loc_t)],
        },
        pools={
            "name": ["Jack", "Oliver", "Sophie"],
            "location": ["London", "Madrid", "Vienna"],
        },
    )
    kb = ClueKB(
        [
            ClueRule("the Eiffel Tower", "Paris", "location", "an iconic building"),
            ClueRule("the Brandenburg Gate", "Berlin", "location", "a famous landmark"),
        ]
    )
    return two_types, config, kb


_STATIC_FILES: dict = {}


def static_env(types):
    """Shared controlled environment for property tests (hypothesis cannot
    use function-scoped fixtures)."""
    import tempfile
    from pathlib import Path

    if not _STATIC_FILES:
        root = Path(tempfile.mkdtemp(prefix="ppts-prop-"))
        (root / "names.txt").write_text("Tom\nAlice\nBob\n", encoding="utf-8")
        (root / "cities.txt").write_text("Paris\nBerlin\nRome\n", encoding="utf-8")
        _STATIC_FILES["root"] = root
    root = _STATIC_FILES["root"]
    name_t, loc_t = types
    config = SanitizerConfig(
        detectors={
            "name": [DetectorConfig("gazetteer", root / "names.txt", name_t)],
            "location": [DetectorConfig("gazetteer", root / "cities.txt", loc_t)],
        },
        pools={
            "name": ["Jack", "Oliver", "Sophie"],
            "location": ["London", "Madrid", "Vienna"],
        },
    )
    kb = ClueKB([ClueRule("the Eiffel Tower", "Paris", "location", "an iconic building")])
    return config, kb


def remove_tokens(text: str, tokens: list[str]) -> str:
    """Delete every whole-token occurrence of each token, leftmost-longest."""
    spans = []
    for tok in tokens:
        if not tok:
            continue
        for m in token_pattern(tok).finditer(text):
            spans.append((m.start(), m.end()))
    chosen = sorted(spans[i] for i in resolve_overlaps(spans))
    out = []
    pos = 0
    for start, end in chosen:
        out.append(text[pos:start])
        pos = end
    out.append(text[pos:])
    return "".join(out)
