import { describe, expect, it } from "vitest";

import type { MapEntry, TurnRecord } from "../src/api.js";
import { buildTurnView, paneSegments, validateTurnView } from "../src/turnview.js";

const entries: MapEntry[] = [
  { plaintext: "Tom", ciphertext: "Rachel", type: "name" },
  { plaintext: "Paris", ciphertext: "London", type: "location" },
];

const turn: TurnRecord = {
  original_in: "Tom travelled to Paris",
  sanitized_in: "Rachel travelled to London",
  raw_out: "Rachel travelled to London",
  restored_out: "Tom travelled to Paris",
  conflicts_fixed: 0,
  turn_index: 0,
};

describe("buildTurnView", () => {
  it("produces four panes with side-appropriate highlights", () => {
    const view = buildTurnView(turn, entries);
    expect(view.typed.highlights.map((h) => h.surface)).toEqual(["Tom", "Paris"]);
    expect(view.transmitted.highlights.map((h) => h.surface)).toEqual(["Rachel", "London"]);
    expect(view.rawReply.highlights.map((h) => h.surface)).toEqual(["Rachel", "London"]);
    expect(view.restoredReply.highlights.map((h) => h.surface)).toEqual(["Tom", "Paris"]);
  });

  it("links each highlight to its mapping row", () => {
    const view = buildTurnView(turn, entries);
    const londonHighlight = view.transmitted.highlights.find((h) => h.surface === "London");
    expect(londonHighlight?.entryIndex).toBe(1);
    expect(entries[londonHighlight!.entryIndex]?.plaintext).toBe("Paris");
  });

  it("passes offset validation", () => {
    expect(validateTurnView(buildTurnView(turn, entries))).toBe(true);
  });

  it("message without private values yields identical panes, zero highlights", () => {
    const clean: TurnRecord = {
      original_in: "what a nice day",
      sanitized_in: "what a nice day",
      raw_out: "what a nice day",
      restored_out: "what a nice day",
      conflicts_fixed: 0,
      turn_index: 1,
    };
    const view = buildTurnView(clean, entries);
    expect(view.typed.text).toBe(view.transmitted.text);
    expect(view.transmitted.highlights).toEqual([]);
  });
});

describe("paneSegments", () => {
  it("splits text into alternating plain and highlighted segments", () => {
    const view = buildTurnView(turn, entries);
    const segments = paneSegments(view.transmitted);
    expect(segments.map((s) => s.text).join("")).toBe(view.transmitted.text);
    expect(segments.filter((s) => s.entryIndex !== null).map((s) => s.text)).toEqual([
      "Rachel",
      "London",
    ]);
  });
});
