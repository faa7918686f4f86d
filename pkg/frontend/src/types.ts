/** Wire and view-model types matching the service API. */

export const CATEGORIES = [
  "Addition",
  "Omission",
  "Mistranslation",
  "Untranslated",
  "Grammar",
  "Spelling",
  "Typography",
  "Unintelligible",
] as const;

export type Category = (typeof CATEGORIES)[number];

export const SEVERITIES = ["Minor", "Major"] as const;
export type Severity = (typeof SEVERITIES)[number];

export const PROVENANCES = ["model", "human", "human_edited_model"] as const;
export type Provenance = (typeof PROVENANCES)[number];

export interface SpanDoc {
  span_id: string;
  category: string;
  severity: string;
  source_start: number | null;
  source_end: number | null;
  translation_start: number;
  translation_end: number;
  explanation: string;
  provenance: string;
}

export interface PairSummary {
  pair_id: string;
  status: string;
  detection_cached: boolean;
  source_text: string;
  mt_text: string;
}

export interface PairPage {
  items: PairSummary[];
  page: number;
  page_size: number;
  total: number;
  total_pages: number;
}

export interface AnnotationDoc {
  pair_id: string;
  annotator_id: string;
  corrected_text: string;
  spans: SpanDoc[];
  overall_score: number | null;
  created_at: string;
  updated_at: string;
  version: number;
}

export interface PairDetail {
  pair_id: string;
  dataset_id: string;
  source_lang: string;
  target_lang: string;
  source_text: string;
  mt_text: string;
  status: string;
  detection_engines: string[];
  annotation_version: number;
  annotation: AnnotationDoc | null;
}

export interface SanitizationReportDoc {
  accepted: number;
  relocated: number;
  clamped: number;
  dropped: { raw_index: number; reason: string }[];
}

export interface DetectResponse {
  pair_id: string;
  engine_id: string;
  cached: boolean;
  spans: SpanDoc[];
  report: SanitizationReportDoc;
}

export interface AnnotationDraft {
  annotator_id: string;
  corrected_text: string;
  spans: SpanDoc[];
  overall_score: number | null;
}

export interface Splice {
  start: number;
  end: number;
  replacement: string;
}
