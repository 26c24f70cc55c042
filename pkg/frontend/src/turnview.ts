/** View-model for the four-pane turn display.
 *
 * Everything here is derived from the gateway's audit record and mapping:
 * typed (what the user wrote), transmitted (what actually crossed the wire),
 * raw reply (what the provider sent back), restored reply (what the user
 * sees). Highlights pair each replaced region with its mapping row.
 */

import type { MapEntry, TurnRecord } from "./api.js";
import { ciphertextHighlights, Highlight, plaintextHighlights } from "./highlights.js";

export interface Pane {
  label: string;
  text: string;
  highlights: Highlight[];
}

export interface TurnView {
  turnIndex: number;
  conflictsFixed: number;
  typed: Pane;
  transmitted: Pane;
  rawReply: Pane;
  restoredReply: Pane;
}

export function buildTurnView(turn: TurnRecord, entries: MapEntry[]): TurnView {
  return {
    turnIndex: turn.turn_index,
    conflictsFixed: turn.conflicts_fixed,
    typed: {
      label: "typed",
      text: turn.original_in,
      highlights: plaintextHighlights(turn.original_in, entries),
    },
    transmitted: {
      label: "transmitted",
      text: turn.sanitized_in,
      highlights: ciphertextHighlights(turn.sanitized_in, entries),
    },
    rawReply: {
      label: "raw reply",
      text: turn.raw_out,
      highlights: ciphertextHighlights(turn.raw_out, entries),
    },
    restoredReply: {
      label: "restored reply",
      text: turn.restored_out,
      highlights: plaintextHighlights(turn.restored_out, entries),
    },
  };
}

/** Split pane text into plain/highlighted segments, in order, for rendering. */
export function paneSegments(pane: Pane): { text: string; entryIndex: number | null }[] {
  const segments: { text: string; entryIndex: number | null }[] = [];
  let cursor = 0;
  for (const h of pane.highlights) {
    if (h.start > cursor) segments.push({ text: pane.text.slice(cursor, h.start), entryIndex: null });
    segments.push({ text: pane.text.slice(h.start, h.end), entryIndex: h.entryIndex });
    cursor = h.end;
  }
  if (cursor < pane.text.length) segments.push({ text: pane.text.slice(cursor), entryIndex: null });
  return segments;
}

/** Every highlight must reference a valid region of its pane text. */
export function validateTurnView(view: TurnView): boolean {
  return [view.typed, view.transmitted, view.rawReply, view.restoredReply].every((pane) =>
    pane.highlights.every(
      (h) =>
        h.start >= 0 &&
        h.start < h.end &&
        h.end <= pane.text.length &&
        pane.text.slice(h.start, h.end) === h.surface,
    ),
  );
}
