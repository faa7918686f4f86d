/**
 * Client-side annotation validation.
 *
 * This must accept exactly the annotations the server accepts: the parity
 * contract test replays a shared corpus through both validators. Keep every
 * rule here in lockstep with the service's span validation.
 */

import { cpLength } from "./codepoints.js";
import { CATEGORIES, PROVENANCES, SEVERITIES, type SpanDoc } from "./types.js";

export interface ClientViolation {
  rule: string;
  spanIds: string[];
  message: string;
}

function canonical(value: string, allowed: readonly string[]): string | null {
  const needle = value.trim().toLowerCase();
  for (const entry of allowed) {
    if (entry.toLowerCase() === needle) return entry;
  }
  return null;
}

export function canonicalCategory(value: string): string | null {
  return canonical(value, CATEGORIES);
}

export function canonicalSeverity(value: string): string | null {
  return canonical(value, SEVERITIES);
}

export function canonicalProvenance(value: string): string | null {
  return canonical(value, PROVENANCES);
}

function isIndex(value: unknown): value is number {
  return typeof value === "number" && Number.isInteger(value);
}

/**
 * Structural parse of one span document; throws on anything the server's
 * span constructor would refuse. Returns the span with canonical casing.
 */
export function parseSpan(doc: Record<string, unknown>): SpanDoc {
  if (typeof doc.span_id !== "string" && typeof doc.span_id !== "number") {
    throw new Error("span_id required");
  }
  const category = canonicalCategory(String(doc.category ?? ""));
  if (category === null) throw new Error(`unknown category ${String(doc.category)}`);
  const severity = canonicalSeverity(String(doc.severity ?? ""));
  if (severity === null) throw new Error(`unknown severity ${String(doc.severity)}`);
  const provenance = canonicalProvenance(String(doc.provenance ?? "human"));
  if (provenance === null) throw new Error(`unknown provenance ${String(doc.provenance)}`);

  const tStart = doc.translation_start;
  const tEnd = doc.translation_end;
  if (!isIndex(tStart) || !isIndex(tEnd)) throw new Error("translation indices must be integers");
  if (tStart < 0 || tEnd <= tStart) throw new Error("bad translation range");

  const sStart = doc.source_start ?? null;
  const sEnd = doc.source_end ?? null;
  if ((sStart === null) !== (sEnd === null)) {
    throw new Error("source_start and source_end must come together");
  }
  if (sStart !== null) {
    if (!isIndex(sStart) || !isIndex(sEnd)) throw new Error("source indices must be integers");
    if (sStart < 0 || (sEnd as number) <= sStart) throw new Error("bad source range");
  }
  if (provenance === "model" && sStart === null) {
    throw new Error("model spans require a source range");
  }
  return {
    span_id: String(doc.span_id),
    category,
    severity,
    source_start: sStart as number | null,
    source_end: sEnd as number | null,
    translation_start: tStart,
    translation_end: tEnd,
    explanation: String(doc.explanation ?? ""),
    provenance,
  };
}

function overlaps(aStart: number, aEnd: number, bStart: number, bEnd: number): boolean {
  return aStart < bEnd && bStart < aEnd;
}

/** Rule-by-rule mirror of the server's annotation validation. */
export function validateDraft(
  correctedText: string,
  sourceText: string,
  spans: SpanDoc[],
): ClientViolation[] {
  const violations: ClientViolation[] = [];
  const correctedLen = cpLength(correctedText);
  const sourceLen = cpLength(sourceText);

  const seen = new Set<string>();
  for (const span of spans) {
    if (seen.has(span.span_id)) {
      violations.push({
        rule: "duplicate_span_id",
        spanIds: [span.span_id],
        message: `span id ${span.span_id} appears more than once`,
      });
    }
    seen.add(span.span_id);

    if (span.translation_end > correctedLen) {
      violations.push({
        rule: "translation_bounds",
        spanIds: [span.span_id],
        message:
          `span ${span.span_id} translation range [${span.translation_start}, ` +
          `${span.translation_end}) exceeds corrected text length ${correctedLen}`,
      });
    }
    if (span.source_end !== null && span.source_end > sourceLen) {
      violations.push({
        rule: "source_bounds",
        spanIds: [span.span_id],
        message:
          `span ${span.span_id} source range [${span.source_start}, ` +
          `${span.source_end}) exceeds source text length ${sourceLen}`,
      });
    }
  }

  for (let i = 0; i < spans.length; i++) {
    for (let j = i + 1; j < spans.length; j++) {
      const a = spans[i]!;
      const b = spans[j]!;
      if (overlaps(a.translation_start, a.translation_end, b.translation_start, b.translation_end)) {
        violations.push({
          rule: "translation_overlap",
          spanIds: [a.span_id, b.span_id],
          message: `spans ${a.span_id} and ${b.span_id} overlap on the translation side`,
        });
      }
      if (
        a.source_start !== null &&
        b.source_start !== null &&
        overlaps(a.source_start, a.source_end!, b.source_start, b.source_end!)
      ) {
        violations.push({
          rule: "source_overlap",
          spanIds: [a.span_id, b.span_id],
          message: `spans ${a.span_id} and ${b.span_id} overlap on the source side`,
        });
      }
    }
  }
  return violations;
}

export interface CorpusCase {
  case_id: string;
  expected_valid: boolean;
  pair: { source_text: string; mt_text: string };
  annotation: {
    corrected_text: string;
    overall_score: number | null;
    spans: Record<string, unknown>[];
  };
}

/** Full accept/reject classification used by the parity contract test. */
export function clientAccepts(caseDoc: CorpusCase): boolean {
  const { pair, annotation } = caseDoc;
  if (!pair.source_text || !pair.mt_text) return false;
  if (typeof annotation.corrected_text !== "string") return false;
  const score = annotation.overall_score;
  if (score !== null && score !== undefined) {
    if (typeof score !== "number" || !Number.isInteger(score) || score < 0 || score > 100) {
      return false;
    }
  }
  let spans: SpanDoc[];
  try {
    spans = annotation.spans.map(parseSpan);
  } catch {
    return false;
  }
  return validateDraft(annotation.corrected_text, pair.source_text, spans).length === 0;
}
