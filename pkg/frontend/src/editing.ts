/**
 * Live splice re-anchoring, mirroring the server's edit semantics exactly.
 *
 * The client applies every keystroke locally so highlights track the text
 * without a round trip; the server re-validates on submit, so divergence
 * cannot corrupt data, but the edit-vector contract test keeps this in
 * lockstep anyway.
 */

import { cpLength, cpSlice } from "./codepoints.js";
import type { SpanDoc, Splice } from "./types.js";

export interface EditResult {
  text: string;
  spans: SpanDoc[];
  dropped: string[];
  truncated: string[];
}

/** Shrink a splice by the common prefix/suffix of replaced vs replacement. */
export function trimSplice(text: string, splice: Splice): Splice {
  const oldChars = Array.from(cpSlice(text, splice.start, splice.end));
  const newChars = Array.from(splice.replacement);
  let prefix = 0;
  const shared = Math.min(oldChars.length, newChars.length);
  while (prefix < shared && oldChars[prefix] === newChars[prefix]) prefix++;
  let suffix = 0;
  const room = shared - prefix;
  while (
    suffix < room &&
    oldChars[oldChars.length - 1 - suffix] === newChars[newChars.length - 1 - suffix]
  ) {
    suffix++;
  }
  return {
    start: splice.start + prefix,
    end: splice.end - suffix,
    replacement: newChars.slice(prefix, newChars.length - suffix).join(""),
  };
}

export function applySplice(text: string, spans: SpanDoc[], splice: Splice): EditResult {
  const textLen = cpLength(text);
  if (splice.start < 0 || splice.end < splice.start || splice.end > textLen) {
    throw new Error(`splice [${splice.start}, ${splice.end}) out of bounds for length ${textLen}`);
  }
  const eff = trimSplice(text, splice);
  const a = eff.start;
  const b = eff.end;
  const delta = cpLength(eff.replacement) - (b - a);
  if (a === b && eff.replacement === "") {
    return { text, spans: spans.slice(), dropped: [], truncated: [] };
  }

  const newText = cpSlice(text, 0, a) + eff.replacement + cpSlice(text, b, textLen);
  const kept: SpanDoc[] = [];
  const dropped: string[] = [];
  const truncated: string[] = [];

  for (const span of spans) {
    const s = span.translation_start;
    const e = span.translation_end;
    if (e <= a) {
      kept.push(span);
    } else if (s >= b) {
      kept.push({ ...span, translation_start: s + delta, translation_end: e + delta });
    } else if (s >= a && e <= b) {
      dropped.push(span.span_id);
    } else {
      let start: number;
      let end: number;
      if (s < a && e > b) {
        start = s;
        end = e + delta; // span encloses the splice and absorbs it
      } else if (s < a) {
        start = s;
        end = a; // right edge cut off
      } else {
        start = b + delta; // left edge cut off, survivor shifts
        end = e + delta;
      }
      if (start !== s || end !== e) truncated.push(span.span_id);
      kept.push({ ...span, translation_start: start, translation_end: end });
    }
  }
  return { text: newText, spans: kept, dropped, truncated };
}

/**
 * Derive the splice a text control just performed, by diffing old vs new
 * content in code points. Returns null when nothing changed.
 */
export function computeSplice(oldText: string, newText: string): Splice | null {
  if (oldText === newText) return null;
  const oldChars = Array.from(oldText);
  const newChars = Array.from(newText);
  let prefix = 0;
  const shared = Math.min(oldChars.length, newChars.length);
  while (prefix < shared && oldChars[prefix] === newChars[prefix]) prefix++;
  let suffix = 0;
  const room = shared - prefix;
  while (
    suffix < room &&
    oldChars[oldChars.length - 1 - suffix] === newChars[newChars.length - 1 - suffix]
  ) {
    suffix++;
  }
  return {
    start: prefix,
    end: oldChars.length - suffix,
    replacement: newChars.slice(prefix, newChars.length - suffix).join(""),
  };
}
