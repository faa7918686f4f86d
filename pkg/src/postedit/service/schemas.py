"""Request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..detection.sanitize import SanitizationReport
from ..spans import (
    Annotation,
    CharRange,
    ErrorCategory,
    ErrorSpan,
    Provenance,
    Severity,
    TranslationPair,
    new_span_id,
)


class HealthResponse(BaseModel):
    status: str


class PairIn(BaseModel):
    pair_id: str = Field(min_length=1)
    source_lang: str
    target_lang: str
    source_text: str = Field(min_length=1)
    mt_text: str = Field(min_length=1)

    def to_domain(self, dataset_id: str) -> TranslationPair:
        return TranslationPair(
            pair_id=self.pair_id,
            dataset_id=dataset_id,
            source_lang=self.source_lang,
            target_lang=self.target_lang,
            source_text=self.source_text,
            mt_text=self.mt_text,
        )


class IngestRequest(BaseModel):
    pairs: list[PairIn]


class IngestResponse(BaseModel):
    ingested: int


class PairSummary(BaseModel):
    pair_id: str
    status: str
    detection_cached: bool
    source_text: str
    mt_text: str


class PairPage(BaseModel):
    items: list[PairSummary]
    page: int
    page_size: int
    total: int
    total_pages: int


class SpanIn(BaseModel):
    span_id: str | None = None
    category: str
    severity: str
    source_start: int | None = None
    source_end: int | None = None
    translation_start: int
    translation_end: int
    explanation: str = ""
    provenance: str = "human"

    def to_domain(self) -> ErrorSpan:
        if (self.source_start is None) != (self.source_end is None):
            raise ValueError("source_start and source_end must come together")
        source_range = None
        if self.source_start is not None:
            source_range = CharRange(self.source_start, self.source_end)
        return ErrorSpan(
            span_id=self.span_id or new_span_id(),
            category=ErrorCategory.from_text(self.category),
            severity=Severity.from_text(self.severity),
            translation_range=CharRange(self.translation_start, self.translation_end),
            source_range=source_range,
            explanation=self.explanation,
            provenance=Provenance.from_text(self.provenance),
        )


class SpanOut(BaseModel):
    span_id: str
    category: str
    severity: str
    source_start: int | None
    source_end: int | None
    translation_start: int
    translation_end: int
    explanation: str
    provenance: str

    @classmethod
    def from_domain(cls, span: ErrorSpan) -> "SpanOut":
        return cls(**span.to_dict())


class AnnotationIn(BaseModel):
    annotator_id: str = Field(min_length=1)
    corrected_text: str
    spans: list[SpanIn] = Field(default_factory=list)
    overall_score: int | None = Field(default=None, ge=0, le=100)

    def to_domain(self, pair_id: str) -> Annotation:
        return Annotation(
            pair_id=pair_id,
            annotator_id=self.annotator_id,
            corrected_text=self.corrected_text,
            spans=tuple(span.to_domain() for span in self.spans),
            overall_score=self.overall_score,
        )


class AnnotationOut(BaseModel):
    pair_id: str
    annotator_id: str
    corrected_text: str
    spans: list[SpanOut]
    overall_score: int | None
    created_at: str
    updated_at: str
    version: int

    @classmethod
    def from_domain(cls, annotation: Annotation) -> "AnnotationOut":
        return cls(
            pair_id=annotation.pair_id,
            annotator_id=annotation.annotator_id,
            corrected_text=annotation.corrected_text,
            spans=[SpanOut.from_domain(s) for s in annotation.spans],
            overall_score=annotation.overall_score,
            created_at=annotation.created_at,
            updated_at=annotation.updated_at,
            version=annotation.version,
        )


class PairDetail(BaseModel):
    pair_id: str
    dataset_id: str
    source_lang: str
    target_lang: str
    source_text: str
    mt_text: str
    status: str
    detection_engines: list[str]
    annotation_version: int
    annotation: AnnotationOut | None


class DroppedSpanOut(BaseModel):
    raw_index: int
    reason: str


class ReportOut(BaseModel):
    accepted: int
    relocated: int
    clamped: int
    dropped: list[DroppedSpanOut]

    @classmethod
    def from_domain(cls, report: SanitizationReport) -> "ReportOut":
        return cls(
            accepted=report.accepted,
            relocated=report.relocated,
            clamped=report.clamped,
            dropped=[DroppedSpanOut(raw_index=i, reason=r) for i, r in report.dropped],
        )


class DetectResponse(BaseModel):
    pair_id: str
    engine_id: str
    cached: bool
    spans: list[SpanOut]
    report: ReportOut


class SubmitResponse(BaseModel):
    pair_id: str
    version: int
    status: str
