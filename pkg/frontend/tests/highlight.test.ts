/**
 * Highlight fidelity contract: what the pane highlights equals the
 * server-side code-point extraction for the same span, and the color per
 * category matches the shared palette fixture.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { highlightedSubstring, segmentText, spanColor, tooltipText } from "../src/highlight.js";
import { PALETTE, colorFor } from "../src/palette.js";
import type { SpanDoc } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "..", "..", "fixtures", name), "utf-8")) as T;
}

interface HighlightCase {
  case_id: string;
  source_text: string;
  translation_text: string;
  spans: SpanDoc[];
  expected: {
    span_id: string;
    source_substring: string | null;
    translation_substring: string;
    color: string;
  }[];
}

describe("palette", () => {
  it("matches the shared palette fixture exactly", () => {
    expect(PALETTE).toEqual(fixture<Record<string, string>>("palette.json"));
  });

  it("eight distinct colors", () => {
    const colors = Object.values(PALETTE);
    expect(colors.length).toBe(8);
    expect(new Set(colors).size).toBe(8);
  });

  it("is case-insensitive like the parsers", () => {
    expect(colorFor("spelling")).toBe(PALETTE["Spelling"]);
  });
});

describe("highlight fidelity on CJK and emoji fixtures", () => {
  const cases = fixture<HighlightCase[]>("highlight_cjk.json");

  for (const testCase of cases) {
    it(testCase.case_id, () => {
      for (const expected of testCase.expected) {
        const span = testCase.spans.find((s) => s.span_id === expected.span_id)!;
        expect(
          highlightedSubstring(testCase.translation_text, span, "translation"),
        ).toBe(expected.translation_substring);
        expect(highlightedSubstring(testCase.source_text, span, "source")).toBe(
          expected.source_substring,
        );
        expect(spanColor(span)).toBe(expected.color);

        // The rendered segment for this span carries exactly that substring.
        const segments = segmentText(testCase.translation_text, testCase.spans, "translation");
        const rendered = segments
          .filter((segment) => segment.span?.span_id === span.span_id)
          .map((segment) => segment.text)
          .join("");
        expect(rendered).toBe(expected.translation_substring);
      }

      // Segments must reassemble the full pane text, nothing lost or doubled.
      for (const side of ["source", "translation"] as const) {
        const text = side === "source" ? testCase.source_text : testCase.translation_text;
        const joined = segmentText(text, testCase.spans, side)
          .map((segment) => segment.text)
          .join("");
        expect(joined).toBe(text);
      }
    });
  }

  it("span without source range highlights only the translation pane", () => {
    const span: SpanDoc = {
      span_id: "x",
      category: "Omission",
      severity: "Minor",
      source_start: null,
      source_end: null,
      translation_start: 0,
      translation_end: 2,
      explanation: "",
      provenance: "human",
    };
    expect(highlightedSubstring("abcd", span, "source")).toBeNull();
    const sourceSegments = segmentText("abcd", [span], "source");
    expect(sourceSegments).toEqual([{ text: "abcd", span: null }]);
  });

  it("tooltip carries category, severity, and explanation", () => {
    const span: SpanDoc = {
      span_id: "x",
      category: "Grammar",
      severity: "Major",
      source_start: null,
      source_end: null,
      translation_start: 0,
      translation_end: 2,
      explanation: "verb agreement",
      provenance: "human",
    };
    const tip = tooltipText(span);
    expect(tip).toContain("Grammar");
    expect(tip).toContain("Major");
    expect(tip).toContain("verb agreement");
  });
});
