"""Core text sanitization: detection, surrogate substitution, consistency repair.

The sanitizer walks an ordered list of privacy types. For each type it locates
private values with the configured detectors, swaps them for surrogates drawn
from a seeded pool, and then checks the rewritten text for residual clues that
would give the substitution away (a landmark that implies a replaced city, for
example). A contradiction is repaired by generalizing the clue; if repair is
impossible the surrogates are resampled, and once the retry budget is spent the
affected values fall back to opaque placeholders so the pass always terminates.

Every plaintext/surrogate pair is recorded in a :class:`SurrogateMap`, the
session-local ledger that the recovery step later inverts.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    ConfigurationError,
    MappingError,
    SpanOverlapError,
    UnfixableConflictError,
    UsageError,
)
from .textmatch import alternation_pattern, resolve_overlaps, token_pattern

DETECTOR_KINDS = ("gazetteer", "pattern", "external-rewriter")

PLACEHOLDER_OPEN = "⟨"   # ⟨
PLACEHOLDER_CLOSE = "⟩"  # ⟩

# Seed spacing between resample attempts; any odd constant works, it only has
# to keep derived seeds distinct and reproducible.
_RETRY_SEED_STEP = 1_000_003


def normalize_value(value: str) -> str:
    """Lowercase, collapse whitespace, strip terminal punctuation."""
    collapsed = " ".join(value.lower().split())
    return collapsed.rstrip(".,;:!?").strip()


@dataclass(frozen=True, eq=False)
class PrivacyType:
    """A protected attribute, e.g. "name" or "location", with its rank.

    Identity is the name; position only orders the processing sequence.
    """

    name: str
    position: int = 0

    def __eq__(self, other):
        return isinstance(other, PrivacyType) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


def privacy_types(names: Sequence[str]) -> list[PrivacyType]:
    """Build an ordered type list; order of `names` is the processing order."""
    seen = set()
    for n in names:
        if n in seen:
            raise UsageError(f"duplicate privacy type {n!r}")
        seen.add(n)
    return [PrivacyType(name=n, position=i) for i, n in enumerate(names)]


@dataclass(frozen=True)
class PrivacySpan:
    """One located occurrence of a private value inside a text."""

    start: int
    end: int
    surface: str
    ptype: PrivacyType

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise UsageError(f"invalid span bounds [{self.start}, {self.end})")
        if len(self.surface) != self.end - self.start:
            raise UsageError("span surface length does not match its bounds")


@dataclass(frozen=True)
class MapEntry:
    plaintext: str
    ciphertext: str
    ptype: str


def is_placeholder(value: str) -> bool:
    return value.startswith(PLACEHOLDER_OPEN) and value.endswith(PLACEHOLDER_CLOSE)


class SurrogateMap:
    """Ordered plaintext→ciphertext bijection for one session.

    Invariants, enforced on every add: no plaintext repeats, no ciphertext
    repeats, plaintext ≠ ciphertext (case-insensitive), and no ciphertext
    collides with another entry's plaintext.
    """

    def __init__(self, entries: Iterable[MapEntry] = ()):
        self.entries: list[MapEntry] = []
        self._by_plain: dict[str, MapEntry] = {}
        self._by_cipher: dict[str, MapEntry] = {}
        for e in entries:
            self.add(e.plaintext, e.ciphertext, e.ptype)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[MapEntry]:
        return iter(self.entries)

    def add(self, plaintext: str, ciphertext: str, ptype: str) -> MapEntry:
        pk, ck = plaintext.casefold(), ciphertext.casefold()
        if pk == ck:
            raise MappingError(f"plaintext and ciphertext coincide: {plaintext!r}")
        if pk in self._by_plain:
            raise MappingError(f"plaintext already mapped: {plaintext!r}")
        if ck in self._by_cipher:
            raise MappingError(f"ciphertext already in use: {ciphertext!r}")
        if ck in self._by_plain:
            raise MappingError(f"ciphertext {ciphertext!r} equals another entry's plaintext")
        if pk in self._by_cipher:
            raise MappingError(f"plaintext {plaintext!r} equals another entry's ciphertext")
        entry = MapEntry(plaintext, ciphertext, ptype)
        self.entries.append(entry)
        self._by_plain[pk] = entry
        self._by_cipher[ck] = entry
        return entry

    def ciphertext_for(self, plaintext: str) -> str | None:
        entry = self._by_plain.get(plaintext.casefold())
        return entry.ciphertext if entry else None

    def plaintext_for(self, ciphertext: str) -> str | None:
        entry = self._by_cipher.get(ciphertext.casefold())
        return entry.plaintext if entry else None

    def has_plaintext(self, value: str) -> bool:
        return value.casefold() in self._by_plain

    def has_ciphertext(self, value: str) -> bool:
        return value.casefold() in self._by_cipher

    def copy(self) -> "SurrogateMap":
        return SurrogateMap(self.entries)

    def to_records(self) -> list[dict[str, str]]:
        return [
            {"plaintext": e.plaintext, "ciphertext": e.ciphertext, "type": e.ptype}
            for e in self.entries
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping[str, str]]) -> "SurrogateMap":
        return cls(
            MapEntry(r["plaintext"], r["ciphertext"], r["type"]) for r in records
        )

    def __repr__(self) -> str:
        return f"SurrogateMap({len(self.entries)} entries)"


@dataclass(frozen=True)
class Conflict:
    """A residual clue in sanitized text that hints at a replaced value."""

    clue_surface: str
    clue_span: tuple[int, int]
    implied_value: str
    conflicting_ciphertext: str
    generalization: str | None = None


@dataclass
class SanitizationOutcome:
    """Result of one sanitization run: rewritten text plus its ledger."""

    sanitized: str
    mapping: SurrogateMap
    fixes_applied: list[Conflict] = field(default_factory=list)
    retries_used: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ClueRule:
    clue_term: str
    implied_value: str
    ptype: str
    generalization: str | None = None


class ClueKB:
    """Rules mapping clue terms to the value they imply and a safe rewording."""

    def __init__(self, rules: Iterable[ClueRule] = ()):
        self.rules: list[ClueRule] = []
        seen: set[tuple[str, str]] = set()
        for rule in rules:
            if not rule.clue_term:
                raise ConfigurationError("clue term must be non-empty")
            key = (rule.clue_term.casefold(), rule.ptype)
            if key in seen:
                raise ConfigurationError(
                    f"duplicate clue term {rule.clue_term!r} for type {rule.ptype!r}"
                )
            seen.add(key)
            self.rules.append(rule)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[ClueRule]:
        return iter(self.rules)

    @classmethod
    def load(cls, path: str | Path) -> "ClueKB":
        """Read tab-separated rules: clue, implied value, type, generalization."""
        rules = []
        for lineno, line in enumerate(_read_lines(path), start=1):
            parts = line.split("\t")
            if len(parts) not in (3, 4):
                raise ConfigurationError(f"{path}:{lineno}: expected 3 or 4 tab-separated fields")
            clue, implied, ptype = (p.strip() for p in parts[:3])
            generalization = parts[3].strip() if len(parts) == 4 else ""
            rules.append(ClueRule(clue, implied, ptype, generalization or None))
        return cls(rules)


def _read_lines(path: str | Path) -> list[str]:
    """Non-blank, non-comment lines of a UTF-8 resource file."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read resource file {path}: {exc}") from exc
    lines = []
    for line in raw.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            lines.append(stripped)
    return lines


def load_wordlist(path: str | Path) -> list[str]:
    """Load a gazetteer or surrogate pool: one value per line, `#` comments."""
    return _read_lines(path)


@dataclass
class DetectorConfig:
    """One detection source for a privacy type.

    kind "gazetteer": resource is a value list matched whole-token,
    case-insensitively. kind "pattern": resource holds one regex per line.
    kind "external-rewriter": resource is a prompt template for a generative
    backend; handled by :func:`external_rewrite`, not by span detection.
    """

    kind: str
    resource: str | Path
    ptype: PrivacyType

    def __post_init__(self):
        if self.kind not in DETECTOR_KINDS:
            raise ConfigurationError(f"unknown detector kind {self.kind!r}")
        self._gazetteer_pattern: re.Pattern[str] | None = None
        self._patterns: list[re.Pattern[str]] | None = None

    def _gazetteer(self) -> re.Pattern[str]:
        if self._gazetteer_pattern is None:
            values = load_wordlist(self.resource)
            self._gazetteer_pattern = alternation_pattern(values) if values else re.compile(r"(?!)")
        return self._gazetteer_pattern

    def _compiled_patterns(self) -> list[re.Pattern[str]]:
        if self._patterns is None:
            compiled = []
            for lineno, line in enumerate(_read_lines(self.resource), start=1):
                try:
                    compiled.append(re.compile(line))
                except re.error as exc:
                    raise ConfigurationError(
                        f"{self.resource}:{lineno}: malformed pattern {line!r}: {exc}"
                    ) from exc
            self._patterns = compiled
        return self._patterns


@dataclass
class SanitizerConfig:
    """Per-type detector lists and surrogate pools."""

    detectors: Mapping[str, Sequence[DetectorConfig]]
    pools: Mapping[str, Sequence[str]]


def detect_spans(text: str, ptype: PrivacyType, cfg: DetectorConfig) -> list[PrivacySpan]:
    """Locate all maximal, non-overlapping occurrences of the type's values.

    Gazetteer matching is whole-token and case-insensitive; overlaps resolve
    leftmost-longest. Pattern detectors return each regex's matches, with
    overlaps across patterns resolved the same way.
    """
    if cfg.ptype != ptype:
        raise UsageError(f"detector for {cfg.ptype.name!r} used with type {ptype.name!r}")
    if not text:
        return []
    if cfg.kind == "gazetteer":
        pattern = cfg._gazetteer()
        return [
            PrivacySpan(m.start(), m.end(), m.group(0), ptype)
            for m in pattern.finditer(text)
        ]
    if cfg.kind == "pattern":
        raw: list[tuple[int, int, str]] = []
        for pattern in cfg._compiled_patterns():
            for m in pattern.finditer(text):
                if m.start() < m.end():
                    raw.append((m.start(), m.end(), m.group(0)))
        keep = resolve_overlaps([(s, e) for s, e, _ in raw])
        chosen = sorted((raw[i] for i in keep), key=lambda t: t[0])
        return [PrivacySpan(s, e, surf, ptype) for s, e, surf in chosen]
    raise ConfigurationError(
        "external-rewriter detectors are driven by external_rewrite(), not span detection"
    )


def _detect_for_type(
    text: str,
    ptype: PrivacyType,
    cfgs: Sequence[DetectorConfig],
    protected: Sequence[tuple[int, int]] = (),
) -> list[PrivacySpan]:
    """Union of all span detectors for a type, minus protected regions."""
    candidates: list[PrivacySpan] = []
    for cfg in cfgs:
        if cfg.kind == "external-rewriter":
            continue
        candidates.extend(detect_spans(text, ptype, cfg))
    keep = resolve_overlaps([(s.start, s.end) for s in candidates])
    spans = sorted((candidates[i] for i in keep), key=lambda s: s.start)
    if protected:
        spans = [
            s for s in spans
            if not any(s.start < pe and ps < s.end for ps, pe in protected)
        ]
    return spans


def choose_surrogate(
    plaintext: str,
    ptype: PrivacyType,
    pool: Sequence[str],
    mapping: SurrogateMap,
    seed: int,
    exclude: Iterable[str] = (),
) -> str:
    """Pick (and record) a surrogate for a plaintext value.

    A plaintext already in the map keeps its existing ciphertext. Otherwise the
    pool is walked in the order produced by shuffling it with `seed`, and the
    first candidate that differs from the plaintext, is not yet used as a
    ciphertext, and does not collide with any mapped plaintext is taken. An
    exhausted pool falls back to an opaque ⟨TYPE-k⟩ placeholder so the caller
    always makes progress.
    """
    existing = mapping.ciphertext_for(plaintext)
    if existing is not None:
        return existing
    order = list(pool)
    random.Random(seed).shuffle(order)
    excluded = {e.casefold() for e in exclude}
    for candidate in order:
        ck = candidate.casefold()
        if ck == plaintext.casefold() or ck in excluded:
            continue
        if mapping.has_ciphertext(candidate) or mapping.has_plaintext(candidate):
            continue
        mapping.add(plaintext, candidate, ptype.name)
        return candidate
    placeholder = f"{PLACEHOLDER_OPEN}{ptype.name.upper()}-{len(mapping)}{PLACEHOLDER_CLOSE}"
    mapping.add(plaintext, placeholder, ptype.name)
    return placeholder


def apply_replacements(text: str, spans: Sequence[PrivacySpan], mapping: SurrogateMap) -> str:
    """Replace each span with its mapped ciphertext, right to left."""
    new_text, _ = _apply_replacements(text, spans, mapping)
    return new_text


def _apply_replacements(
    text: str, spans: Sequence[PrivacySpan], mapping: SurrogateMap
) -> tuple[str, list[tuple[int, int]]]:
    """Replace spans and also return the inserted regions in new coordinates."""
    ordered = sorted(spans, key=lambda s: s.start)
    for left, right in zip(ordered, ordered[1:]):
        if right.start < left.end:
            raise SpanOverlapError(
                f"spans [{left.start},{left.end}) and [{right.start},{right.end}) overlap"
            )
    for span in ordered:
        if text[span.start:span.end] != span.surface:
            raise UsageError(f"span surface {span.surface!r} does not match the text")
    out = text
    for span in reversed(ordered):
        ciphertext = mapping.ciphertext_for(span.surface)
        if ciphertext is None:
            raise UsageError(f"no map entry for surface {span.surface!r}")
        out = out[: span.start] + ciphertext + out[span.end:]
    regions: list[tuple[int, int]] = []
    shift = 0
    for span in ordered:
        ciphertext = mapping.ciphertext_for(span.surface) or ""
        start = span.start + shift
        regions.append((start, start + len(ciphertext)))
        shift += len(ciphertext) - (span.end - span.start)
    return out, regions


def _shift_regions(
    regions: Sequence[tuple[int, int]], edits: Sequence[tuple[int, int, int]]
) -> list[tuple[int, int]]:
    """Translate regions across edits given as (start, end, new_length)."""
    shifted = []
    for a, b in regions:
        delta = sum(new_len - (e - s) for s, e, new_len in edits if e <= a)
        shifted.append((a + delta, b + delta))
    return shifted


def reasonability_check(sanitized: str, mapping: SurrogateMap, kb: ClueKB) -> list[Conflict]:
    """Find clues in the sanitized text that contradict the substitutions.

    A clue conflicts when the value it implies is absent from the visible
    ciphertexts of its type yet equals some plaintext in the map: the text
    still hints at the true value. An empty list means "not contradictory".
    """
    conflicts: list[Conflict] = []
    for rule in kb:
        implied_norm = normalize_value(rule.implied_value)
        pattern = token_pattern(rule.clue_term)
        for match in pattern.finditer(sanitized):
            same_type_ciphers = [e.ciphertext for e in mapping if e.ptype == rule.ptype]
            if any(normalize_value(c) == implied_norm for c in same_type_ciphers):
                continue  # the clue agrees with what the text now claims
            contradicted = next(
                (e for e in mapping if normalize_value(e.plaintext) == implied_norm), None
            )
            if contradicted is None:
                continue  # nothing in the map is given away by this clue
            conflicts.append(
                Conflict(
                    clue_surface=match.group(0),
                    clue_span=(match.start(), match.end()),
                    implied_value=rule.implied_value,
                    conflicting_ciphertext=contradicted.ciphertext,
                    generalization=rule.generalization,
                )
            )
    return conflicts


def fix_inconsistencies(sanitized: str, conflicts: Sequence[Conflict]) -> str:
    """Replace each conflicting clue with its generalization.

    Raises :class:`UnfixableConflictError` when any conflict lacks a
    generalization; the caller is expected to resample surrogates instead.
    """
    new_text, _, _ = _apply_fixes(sanitized, conflicts)
    return new_text


def _apply_fixes(
    sanitized: str, conflicts: Sequence[Conflict]
) -> tuple[str, list[Conflict], list[tuple[int, int, int]]]:
    """Apply fixes right-to-left; returns (text, applied, edits)."""
    for conflict in conflicts:
        if not conflict.generalization:
            raise UnfixableConflictError(conflict)
    ordered = sorted(conflicts, key=lambda c: c.clue_span[0])
    out = sanitized
    applied: list[Conflict] = []
    edits: list[tuple[int, int, int]] = []
    boundary = len(sanitized)
    for conflict in reversed(ordered):
        start, end = conflict.clue_span
        if end > boundary:
            continue  # overlaps a clue already generalized
        if sanitized[start:end] != conflict.clue_surface:
            raise UsageError(f"stale conflict span for clue {conflict.clue_surface!r}")
        out = out[:start] + (conflict.generalization or "") + out[end:]
        applied.append(conflict)
        edits.append((start, end, len(conflict.generalization or "")))
        boundary = start
    applied.reverse()
    edits.reverse()
    return out, applied, edits


def _placeholder_map(
    base: SurrogateMap, plaintexts: Sequence[str], ptype: PrivacyType
) -> SurrogateMap:
    trial = base.copy()
    for plain in plaintexts:
        if trial.ciphertext_for(plain) is None:
            label = f"{PLACEHOLDER_OPEN}{ptype.name.upper()}-{len(trial)}{PLACEHOLDER_CLOSE}"
            trial.add(plain, label, ptype.name)
    return trial


def sanitize(
    text: str,
    types: Sequence[PrivacyType],
    config: SanitizerConfig,
    kb: ClueKB,
    seed: int,
    max_retries: int = 3,
    *,
    reasonability: bool = True,
    initial_map: SurrogateMap | None = None,
    completer: Callable | None = None,
) -> SanitizationOutcome:
    """Run the full per-type sanitization loop over a text.

    For each type in order: detect values, substitute surrogates, and check
    consistency. A contradictory result is first repaired by generalizing the
    offending clues; if that cannot settle it, surrogates are resampled with a
    derived seed, and the final retry forces placeholders, which bounds the
    work at (1 + max_retries) replacement passes per type. Entries already in
    `initial_map` keep their ciphertexts, giving session consistency.
    """
    if max_retries < 1:
        raise UsageError("max_retries must be >= 1")
    names = [t.name for t in types]
    if len(set(names)) != len(names):
        raise UsageError("privacy type names must be unique")

    mapping = initial_map.copy() if initial_map is not None else SurrogateMap()
    current = text
    protected: list[tuple[int, int]] = []
    fixes_applied: list[Conflict] = []
    retries_used: dict[str, int] = {}

    for ptype in sorted(types, key=lambda t: t.position):
        cfgs = list(config.detectors.get(ptype.name, ()))
        rewriters = [c for c in cfgs if c.kind == "external-rewriter"]
        if rewriters:
            current, mapping, retries = _rewriter_pass(
                current, ptype, rewriters[0], mapping, kb, max_retries,
                reasonability=reasonability, completer=completer,
            )
            retries_used[ptype.name] = retries
            continue

        spans = _detect_for_type(current, ptype, cfgs, protected)
        if not spans:
            retries_used[ptype.name] = 0
            continue

        pool = list(config.pools.get(ptype.name, ()))
        text_before = current
        protected_before = list(protected)
        # Distinct plaintexts in first-occurrence order; candidates must also
        # avoid every pending plaintext of this pass, not just mapped ones.
        plaintexts: list[str] = []
        seen: set[str] = set()
        for span in spans:
            key = span.surface.casefold()
            if key not in seen:
                seen.add(key)
                plaintexts.append(span.surface)
        pending = {p.casefold() for p in plaintexts}

        for attempt in range(max_retries + 1):
            if attempt == max_retries:
                trial = _placeholder_map(mapping, plaintexts, ptype)
            else:
                trial = mapping.copy()
                attempt_seed = seed + _RETRY_SEED_STEP * attempt
                for plain in plaintexts:
                    choose_surrogate(plain, ptype, pool, trial, attempt_seed, exclude=pending)

            candidate, regions = _apply_replacements(text_before, spans, trial)
            edits = [(s.start, s.end, len(trial.ciphertext_for(s.surface) or "")) for s in spans]
            new_protected = _shift_regions(protected_before, edits) + regions
            attempt_fixes: list[Conflict] = []

            if reasonability:
                conflicts = reasonability_check(candidate, trial, kb)
                if conflicts:
                    final = attempt == max_retries
                    fixable = [c for c in conflicts if c.generalization]
                    if len(fixable) < len(conflicts) and not final:
                        continue  # unfixable: resample this type's surrogates
                    fixed, applied, fix_edits = _apply_fixes(candidate, fixable)
                    if reasonability_check(fixed, trial, kb) and not final:
                        continue
                    candidate = fixed
                    attempt_fixes = applied
                    new_protected = _shift_regions(new_protected, fix_edits) + [
                        (s, s + ln) for s, _, ln in fix_edits
                    ]

            mapping = trial
            current = candidate
            protected = sorted(new_protected)
            fixes_applied.extend(attempt_fixes)
            retries_used[ptype.name] = attempt
            break

    return SanitizationOutcome(
        sanitized=current,
        mapping=mapping,
        fixes_applied=fixes_applied,
        retries_used=retries_used,
    )


# --- external rewriter backend ------------------------------------------------

def render_rewrite_prompt(template: str, requirements: str, examples: str, text: str) -> str:
    """Fill the {{requirements}}/{{examples}}/{{input}} slots of a template."""
    return (
        template.replace("{{requirements}}", requirements)
        .replace("{{examples}}", examples)
        .replace("{{input}}", text)
    )


def parse_rewriter_reply(reply: str) -> tuple[str, list[tuple[str, str]]]:
    """Parse a generative rewriter reply into (sanitized text, pairs).

    The backend is instructed to answer with a JSON object carrying the
    rewritten text and the plaintext/ciphertext pairs it introduced.
    """
    import json

    try:
        data = json.loads(reply)
        sanitized = data["sanitized"]
        pairs = [(str(p), str(c)) for p, c in data.get("pairs", [])]
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigurationError(f"unparseable rewriter reply: {exc}") from exc
    return sanitized, pairs


def external_rewrite(
    text: str,
    ptype: PrivacyType,
    cfg: DetectorConfig,
    completer: Callable,
) -> tuple[str, list[tuple[str, str]]]:
    """Ask a generative backend to rewrite one type's private values.

    The prompt template names the type in its requirements section; the
    completer is any callable taking the rendered prompt and returning the
    model text. Excluded from CI against real backends.
    """
    template = Path(cfg.resource).read_text(encoding="utf-8")
    requirements = (
        f"Replace every {ptype.name} value in the input with a realistic surrogate. "
        "Answer with JSON: {\"sanitized\": ..., \"pairs\": [[original, surrogate], ...]}"
    )
    examples = 'Input: Tom lives here. -> {"sanitized": "Max lives here.", "pairs": [["Tom", "Max"]]}'
    prompt = render_rewrite_prompt(template, requirements, examples, text)
    return parse_rewriter_reply(completer(prompt))


def _rewriter_pass(
    text: str,
    ptype: PrivacyType,
    cfg: DetectorConfig,
    mapping: SurrogateMap,
    kb: ClueKB,
    max_retries: int,
    *,
    reasonability: bool,
    completer: Callable | None,
) -> tuple[str, SurrogateMap, int]:
    if completer is None:
        raise ConfigurationError(
            f"type {ptype.name!r} uses an external rewriter but no completer was supplied"
        )
    retries = 0
    for attempt in range(max_retries + 1):
        candidate, pairs = external_rewrite(text, ptype, cfg, completer)
        trial = mapping.copy()
        for plain, cipher in pairs:
            if trial.ciphertext_for(plain) is None:
                trial.add(plain, cipher, ptype.name)
        if not reasonability or not reasonability_check(candidate, trial, kb):
            return candidate, trial, retries
        try:
            fixed, _, _ = _apply_fixes(candidate, reasonability_check(candidate, trial, kb))
            if not reasonability_check(fixed, trial, kb):
                return fixed, trial, retries
        except UnfixableConflictError:
            pass
        retries = attempt + 1
    return candidate, trial, min(retries, max_retries)
