"""Restores original private values in a model response via the session map."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .sanitizer import SurrogateMap, is_placeholder
from .textmatch import resolve_overlaps

# Optional possessive tail, either apostrophe style, kept across replacement.
_POSSESSIVE = "(?:['’]s)?"


@dataclass(frozen=True)
class Substitution:
    """One restored region: which ciphertext was found where."""

    ciphertext: str
    plaintext: str
    position: int


@dataclass
class RecoveredResponse:
    text: str
    substitutions: list[Substitution] = field(default_factory=list)
    unmatched_ciphertexts: list[str] = field(default_factory=list)


def _cipher_pattern(ciphertext: str) -> re.Pattern[str]:
    if is_placeholder(ciphertext):
        # Placeholders are opaque tokens; match them exactly, no possessive.
        return re.compile(re.escape(ciphertext))
    return re.compile(
        r"(?<!\w)" + re.escape(ciphertext) + _POSSESSIVE + r"(?!\w)", re.IGNORECASE
    )


def recover(response: str, mapping: SurrogateMap) -> RecoveredResponse:
    """Replace every whole-token occurrence of each ciphertext with its plaintext.

    Matching is case-insensitive and understands the simple possessive form
    (ciphertext + "'s" restores to plaintext + "'s"). Overlapping candidates
    resolve leftmost-longest, so a longer ciphertext like "New London" is
    consumed before "London" can match inside it. Positions refer to the
    response as received.
    """
    candidates: list[tuple[int, int, str, str, str]] = []  # start, end, replacement, cipher, plain
    matched_ciphers: set[str] = set()
    for entry in mapping:
        pattern = _cipher_pattern(entry.ciphertext)
        for m in pattern.finditer(response):
            tail = response[m.start() + len(entry.ciphertext): m.end()]
            candidates.append(
                (m.start(), m.end(), entry.plaintext + tail, entry.ciphertext, entry.plaintext)
            )
    keep = resolve_overlaps([(c[0], c[1]) for c in candidates])
    chosen = sorted((candidates[i] for i in keep), key=lambda c: c[0])

    out = response
    substitutions: list[Substitution] = []
    for start, end, replacement, cipher, plain in reversed(chosen):
        out = out[:start] + replacement + out[end:]
    for start, _, _, cipher, plain in chosen:
        substitutions.append(Substitution(ciphertext=cipher, plaintext=plain, position=start))
        matched_ciphers.add(cipher.casefold())

    unmatched = [
        e.ciphertext for e in mapping if e.ciphertext.casefold() not in matched_ciphers
    ]
    return RecoveredResponse(text=out, substitutions=substitutions, unmatched_ciphertexts=unmatched)
