/**
 * Span highlighting over dual panes.
 *
 * Splitting happens strictly at code-point boundaries so a highlight over
 * CJK or emoji text covers exactly the characters the indices name,
 * regardless of glyph width or UTF-16 surrogates.
 */

import { cpLength, cpSlice } from "./codepoints.js";
import { colorFor } from "./palette.js";
import type { SpanDoc } from "./types.js";

export type Side = "source" | "translation";

export interface Segment {
  text: string;
  span: SpanDoc | null;
}

interface Ranged {
  start: number;
  end: number;
  span: SpanDoc;
}

function sideRanges(spans: SpanDoc[], side: Side): Ranged[] {
  const out: Ranged[] = [];
  for (const span of spans) {
    if (side === "translation") {
      out.push({ start: span.translation_start, end: span.translation_end, span });
    } else if (span.source_start !== null && span.source_end !== null) {
      out.push({ start: span.source_start, end: span.source_end, span });
    }
  }
  out.sort((a, b) => a.start - b.start);
  return out;
}

/** Cut the text into plain and highlighted runs for one pane. */
export function segmentText(text: string, spans: SpanDoc[], side: Side): Segment[] {
  const total = cpLength(text);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const { start, end, span } of sideRanges(spans, side)) {
    if (end > total) continue; // invalid spans never reach render; belt and braces
    if (start > cursor) segments.push({ text: cpSlice(text, cursor, start), span: null });
    segments.push({ text: cpSlice(text, start, end), span });
    cursor = end;
  }
  if (cursor < total) segments.push({ text: cpSlice(text, cursor, total), span: null });
  return segments;
}

/** The exact substring a span highlights in one pane, or null for no range. */
export function highlightedSubstring(
  text: string,
  span: SpanDoc,
  side: Side,
): string | null {
  if (side === "translation") {
    return cpSlice(text, span.translation_start, span.translation_end);
  }
  if (span.source_start === null || span.source_end === null) return null;
  return cpSlice(text, span.source_start, span.source_end);
}

export function spanColor(span: SpanDoc): string {
  return colorFor(span.category);
}

export function tooltipText(span: SpanDoc): string {
  const lines = [`${span.category} · ${span.severity}`];
  if (span.explanation) lines.push(span.explanation);
  return lines.join("\n");
}
