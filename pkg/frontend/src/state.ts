/**
 * Single-document editing session state.
 *
 * The draft is the working copy of the annotation: every quick action and
 * text edit lands here first, is re-validated client-side, and only a clean
 * draft can be submitted. The server version rides along for the If-Match
 * compare-and-swap on save; a conflict never clobbers the draft.
 */

import type { ApiClient, SubmitOutcome } from "./api.js";
import { applySplice, computeSplice } from "./editing.js";
import { validateDraft, type ClientViolation } from "./validation.js";
import type { AnnotationDraft, PairDetail, SpanDoc } from "./types.js";

export interface Notice {
  kind: "dropped" | "truncated" | "info" | "error";
  text: string;
}

export interface ViewState {
  datasetId: string | null;
  pair: PairDetail | null;
  activeEngine: string;
  draft: AnnotationDraft | null;
  pendingSave: boolean;
  serverVersion: number;
  violations: ClientViolation[];
  notices: Notice[];
  conflictVersion: number | null;
  detecting: boolean;
}

export type Listener = (state: ViewState) => void;

let counter = 0;

export function newSpanId(): string {
  counter += 1;
  return `ui-${Date.now().toString(36)}-${counter}`;
}

export class AnnotationSession {
  private state: ViewState = {
    datasetId: null,
    pair: null,
    activeEngine: "stub",
    draft: null,
    pendingSave: false,
    serverVersion: 0,
    violations: [],
    notices: [],
    conflictVersion: null,
    detecting: false,
  };

  private listeners = new Set<Listener>();

  constructor(private annotatorId: string) {}

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    listener(this.state);
    return () => this.listeners.delete(listener);
  }

  get current(): ViewState {
    return this.state;
  }

  private emit(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    if (this.state.draft && this.state.pair) {
      this.state.violations = validateDraft(
        this.state.draft.corrected_text,
        this.state.pair.source_text,
        this.state.draft.spans,
      );
    } else {
      this.state.violations = [];
    }
    for (const listener of this.listeners) listener(this.state);
  }

  setDataset(datasetId: string): void {
    this.emit({ datasetId });
  }

  setEngine(engine: string): void {
    this.emit({ activeEngine: engine });
  }

  /** Start editing one pair; the draft mirrors the stored annotation. */
  loadPair(detail: PairDetail): void {
    const annotation = detail.annotation;
    const draft: AnnotationDraft = annotation
      ? {
          annotator_id: this.annotatorId,
          corrected_text: annotation.corrected_text,
          spans: annotation.spans.map((s) => ({ ...s })),
          overall_score: annotation.overall_score,
        }
      : {
          annotator_id: this.annotatorId,
          corrected_text: detail.mt_text,
          spans: [],
          overall_score: null,
        };
    this.emit({
      pair: detail,
      draft,
      pendingSave: false,
      serverVersion: detail.annotation_version,
      notices: [],
      conflictVersion: null,
    });
  }

  /** Seed the draft with detector suggestions (keeps existing human spans). */
  acceptSuggestions(spans: SpanDoc[]): void {
    const draft = this.state.draft;
    if (!draft) return;
    const merged = [...draft.spans];
    for (const span of spans) {
      const clash = merged.some(
        (existing) =>
          existing.translation_start < span.translation_end &&
          span.translation_start < existing.translation_end,
      );
      if (!clash) merged.push({ ...span });
    }
    merged.sort((a, b) => a.translation_start - b.translation_start);
    this.emit({ draft: { ...draft, spans: merged }, pendingSave: true });
  }

  /** Mirror a text-control change: diff, re-anchor spans, note casualties. */
  applyTextEdit(newText: string): void {
    const draft = this.state.draft;
    if (!draft) return;
    const splice = computeSplice(draft.corrected_text, newText);
    if (!splice) return;
    const result = applySplice(draft.corrected_text, draft.spans, splice);
    const notices: Notice[] = [...this.state.notices];
    for (const spanId of result.dropped) {
      notices.push({ kind: "dropped", text: `span ${spanId} removed by the edit` });
    }
    for (const spanId of result.truncated) {
      notices.push({ kind: "truncated", text: `span ${spanId} reshaped by the edit` });
    }
    this.emit({
      draft: { ...draft, corrected_text: result.text, spans: result.spans },
      pendingSave: true,
      notices,
    });
  }

  /** Quick action: insert a new span; refused when it would overlap. */
  insertSpan(span: Omit<SpanDoc, "span_id"> & { span_id?: string }): SpanDoc | null {
    const draft = this.state.draft;
    if (!draft) return null;
    const candidate: SpanDoc = { span_id: span.span_id ?? newSpanId(), ...span } as SpanDoc;
    const clash = draft.spans.some(
      (existing) =>
        existing.translation_start < candidate.translation_end &&
        candidate.translation_start < existing.translation_end,
    );
    if (clash) return null;
    const spans = [...draft.spans, candidate].sort(
      (a, b) => a.translation_start - b.translation_start,
    );
    this.emit({ draft: { ...draft, spans }, pendingSave: true });
    return candidate;
  }

  /** True when a selection could become a new span (no same-side overlap). */
  canInsertAt(start: number, end: number): boolean {
    const draft = this.state.draft;
    if (!draft || start >= end) return false;
    return !draft.spans.some(
      (existing) => existing.translation_start < end && start < existing.translation_end,
    );
  }

  deleteSpan(spanId: string): void {
    const draft = this.state.draft;
    if (!draft) return;
    this.emit({
      draft: { ...draft, spans: draft.spans.filter((s) => s.span_id !== spanId) },
      pendingSave: true,
    });
  }

  /** Quick action: change category/severity; model spans become edited. */
  updateSpan(spanId: string, patch: Partial<Pick<SpanDoc, "category" | "severity">>): void {
    const draft = this.state.draft;
    if (!draft) return;
    const spans = draft.spans.map((span) => {
      if (span.span_id !== spanId) return span;
      const provenance = span.provenance === "model" ? "human_edited_model" : span.provenance;
      return { ...span, ...patch, provenance };
    });
    this.emit({ draft: { ...draft, spans }, pendingSave: true });
  }

  setScore(score: number | null): void {
    const draft = this.state.draft;
    if (!draft) return;
    this.emit({ draft: { ...draft, overall_score: score }, pendingSave: true });
  }

  /** Submission is enabled exactly when the draft passes validation. */
  canSubmit(): boolean {
    return this.state.draft !== null && this.state.violations.length === 0;
  }

  async detect(api: ApiClient, force = false): Promise<void> {
    const pair = this.state.pair;
    if (!pair || this.state.detecting) return;
    this.emit({ detecting: true });
    try {
      const result = await api.detect(pair.pair_id, this.state.activeEngine, force);
      this.acceptSuggestions(result.spans);
      this.emit({ detecting: false });
    } catch (error) {
      this.emit({
        detecting: false,
        notices: [
          ...this.state.notices,
          { kind: "error", text: `detection failed: ${String(error)}` },
        ],
      });
    }
  }

  async submit(api: ApiClient): Promise<SubmitOutcome | null> {
    const { pair, draft, serverVersion } = this.state;
    if (!pair || !draft || !this.canSubmit()) return null;
    const outcome = await api.submitAnnotation(pair.pair_id, draft, serverVersion);
    if (outcome.kind === "ok") {
      this.emit({
        serverVersion: outcome.version,
        pendingSave: false,
        conflictVersion: null,
        pair: { ...pair, status: "completed", annotation_version: outcome.version },
      });
    } else if (outcome.kind === "conflict") {
      // Keep the draft untouched; surface the server's version for the
      // merge prompt.
      this.emit({ conflictVersion: outcome.currentVersion });
    } else {
      this.emit({
        notices: [
          ...this.state.notices,
          { kind: "error", text: `submit failed: ${JSON.stringify(outcome)}` },
        ],
      });
    }
    return outcome;
  }

  /** Resolve a conflict by retrying against the server's current version. */
  adoptServerVersion(): void {
    if (this.state.conflictVersion === null) return;
    this.emit({ serverVersion: this.state.conflictVersion, conflictVersion: null });
  }

  clearNotices(): void {
    this.emit({ notices: [] });
  }
}
