"""Whole-token matching helpers shared by detection, attacks, and metrics."""

from __future__ import annotations

import re

# Custom lookarounds instead of \b so values that start or end with a
# non-word character still get boundary semantics at both edges.
_BOUNDARY_L = r"(?<!\w)"
_BOUNDARY_R = r"(?!\w)"


def token_pattern(value: str, *, case_sensitive: bool = False) -> re.Pattern[str]:
    """Compile a whole-token pattern for a literal value."""
    flags = 0 if case_sensitive else re.IGNORECASE
    return re.compile(_BOUNDARY_L + re.escape(value) + _BOUNDARY_R, flags)


def alternation_pattern(values: list[str], *, case_sensitive: bool = False) -> re.Pattern[str]:
    """Compile one pattern matching any of the values as a whole token.

    Alternatives are ordered longest-first so that at any position the
    longest value wins, giving leftmost-longest semantics under finditer.
    """
    ordered = sorted(set(values), key=len, reverse=True)
    body = "|".join(re.escape(v) for v in ordered)
    flags = 0 if case_sensitive else re.IGNORECASE
    return re.compile(f"{_BOUNDARY_L}(?:{body}){_BOUNDARY_R}", flags)


def contains_token(text: str, value: str) -> bool:
    """True when value occurs in text as a whole token, case-insensitively."""
    return token_pattern(value).search(text) is not None


def resolve_overlaps(spans: list[tuple[int, int]]) -> list[int]:
    """Pick a non-overlapping subset of (start, end) spans, leftmost-longest.

    Returns indices into the input list. Ties at the same start prefer the
    longer span; exact duplicates keep the first occurrence.
    """
    order = sorted(range(len(spans)), key=lambda i: (spans[i][0], -(spans[i][1] - spans[i][0])))
    chosen: list[int] = []
    cursor = -1
    for i in order:
        start, end = spans[i]
        if start >= cursor:
            chosen.append(i)
            cursor = end
    return chosen
