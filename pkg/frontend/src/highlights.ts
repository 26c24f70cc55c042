/** Locate map-entry occurrences inside pane text for highlight rendering.
 *
 * The UI performs no sanitization of its own: it only finds where the values
 * reported by the gateway's mapping appear in the strings the gateway already
 * produced, so each highlight can link its region to a mapping row.
 */

import type { MapEntry } from "./api.js";

export interface Highlight {
  start: number;
  end: number;
  /** The matched surface in the pane text. */
  surface: string;
  /** Index of the mapping row this region belongs to. */
  entryIndex: number;
}

const escapeRegex = (value: string): string => value.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");

function tokenRegex(value: string): RegExp {
  return new RegExp(`(?<!\\w)${escapeRegex(value)}(?!\\w)`, "gi");
}

/**
 * Whole-token, case-insensitive occurrences of each needle, longest needle
 * winning where candidates overlap (so "New London" beats "London").
 */
export function computeHighlights(
  text: string,
  needles: { value: string; entryIndex: number }[],
): Highlight[] {
  const candidates: Highlight[] = [];
  for (const needle of needles) {
    if (!needle.value) continue;
    for (const match of text.matchAll(tokenRegex(needle.value))) {
      const start = match.index ?? 0;
      candidates.push({
        start,
        end: start + match[0].length,
        surface: match[0],
        entryIndex: needle.entryIndex,
      });
    }
  }
  candidates.sort((a, b) => a.start - b.start || (b.end - b.start) - (a.end - a.start));
  const chosen: Highlight[] = [];
  let cursor = -1;
  for (const candidate of candidates) {
    if (candidate.start >= cursor) {
      chosen.push(candidate);
      cursor = candidate.end;
    }
  }
  return chosen;
}

/** Highlights of the original (plaintext) side of every mapping row. */
export function plaintextHighlights(text: string, entries: MapEntry[]): Highlight[] {
  return computeHighlights(
    text,
    entries.map((entry, index) => ({ value: entry.plaintext, entryIndex: index })),
  );
}

/** Highlights of the substituted (ciphertext) side of every mapping row. */
export function ciphertextHighlights(text: string, entries: MapEntry[]): Highlight[] {
  return computeHighlights(
    text,
    entries.map((entry, index) => ({ value: entry.ciphertext, entryIndex: index })),
  );
}
