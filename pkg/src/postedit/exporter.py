"""ESA/MQM-compatible dataset export: JSON and CSV, with validated re-import.

Both formats are deterministic byte-for-byte for identical input, use UTF-8
without a byte-order mark, and carry code-point indices exactly as stored.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .spans import (
    Annotation,
    CharRange,
    ErrorCategory,
    ErrorSpan,
    Provenance,
    Severity,
    TranslationPair,
    validate_annotation,
)

FORMAT_VERSION = "1.0"
SPAN_UNIT = "unicode_code_point"

CSV_HEADER = (
    "pair_id",
    "source_lang",
    "target_lang",
    "source_text",
    "mt_text",
    "corrected_text",
    "annotator_id",
    "overall_score",
    "category",
    "severity",
    "source_start",
    "source_end",
    "translation_start",
    "translation_end",
    "explanation",
    "provenance",
)


class ExportError(Exception):
    pass


class ExportVersionError(ExportError):
    def __init__(self, found: object):
        self.found = found
        super().__init__(f"unsupported format_version {found!r}, expected {FORMAT_VERSION!r}")


class ExportValidationError(ExportError):
    def __init__(self, record_index: int, rule: str, message: str):
        self.record_index = record_index
        self.rule = rule
        super().__init__(f"record {record_index}: [{rule}] {message}")


@dataclass(frozen=True)
class ExportSpan:
    category: str
    severity: str
    source_start: int | None
    source_end: int | None
    translation_start: int
    translation_end: int
    explanation: str
    provenance: str


@dataclass(frozen=True)
class ExportRecord:
    pair_id: str
    source_lang: str
    target_lang: str
    source_text: str
    mt_text: str
    corrected_text: str
    annotator_id: str
    overall_score: int | None
    spans: tuple[ExportSpan, ...]


def record_from_annotation(pair: TranslationPair, annotation: Annotation) -> ExportRecord:
    """Flatten a stored pair + annotation into one export record.

    Translation indices refer to corrected_text, where editing maintains
    them; source indices refer to source_text.
    """
    return ExportRecord(
        pair_id=pair.pair_id,
        source_lang=pair.source_lang,
        target_lang=pair.target_lang,
        source_text=pair.source_text,
        mt_text=pair.mt_text,
        corrected_text=annotation.corrected_text,
        annotator_id=annotation.annotator_id,
        overall_score=annotation.overall_score,
        spans=tuple(
            ExportSpan(
                category=s.category.value,
                severity=s.severity.value,
                source_start=s.source_range.start if s.source_range else None,
                source_end=s.source_range.end if s.source_range else None,
                translation_start=s.translation_range.start,
                translation_end=s.translation_range.end,
                explanation=s.explanation,
                provenance=s.provenance.value,
            )
            for s in annotation.spans
        ),
    )


def _domain_objects(record: ExportRecord) -> tuple[TranslationPair, Annotation]:
    """Rebuild span_core objects so export shares the one true validator."""
    pair = TranslationPair(
        pair_id=record.pair_id or "?",
        dataset_id="export",
        source_lang=record.source_lang,
        target_lang=record.target_lang,
        source_text=record.source_text,
        mt_text=record.mt_text,
    )
    spans = []
    for i, s in enumerate(record.spans):
        source_range = None
        if (s.source_start is None) != (s.source_end is None):
            raise ValueError(f"span {i}: source_start and source_end must come together")
        if s.source_start is not None:
            source_range = CharRange(s.source_start, s.source_end)
        spans.append(
            ErrorSpan(
                span_id=f"export:{i}",
                category=ErrorCategory.from_text(s.category),
                severity=Severity.from_text(s.severity),
                translation_range=CharRange(s.translation_start, s.translation_end),
                source_range=source_range,
                explanation=s.explanation,
                provenance=Provenance.from_text(s.provenance),
            )
        )
    annotation = Annotation(
        pair_id=pair.pair_id,
        annotator_id=record.annotator_id,
        corrected_text=record.corrected_text,
        spans=tuple(spans),
        overall_score=record.overall_score,
    )
    return pair, annotation


def validate_record(record: ExportRecord, index: int) -> None:
    try:
        pair, annotation = _domain_objects(record)
    except (ValueError, TypeError) as exc:
        raise ExportValidationError(index, "structure", str(exc)) from exc
    violations = validate_annotation(annotation, pair)
    if violations:
        first = violations[0]
        raise ExportValidationError(index, first.rule, first.message)


def _span_doc(span: ExportSpan) -> dict:
    return {
        "category": span.category,
        "severity": span.severity,
        "source_start": span.source_start,
        "source_end": span.source_end,
        "translation_start": span.translation_start,
        "translation_end": span.translation_end,
        "explanation": span.explanation,
        "provenance": span.provenance,
    }


def _record_doc(record: ExportRecord) -> dict:
    return {
        "pair_id": record.pair_id,
        "source_lang": record.source_lang,
        "target_lang": record.target_lang,
        "source_text": record.source_text,
        "mt_text": record.mt_text,
        "corrected_text": record.corrected_text,
        "annotator_id": record.annotator_id,
        "overall_score": record.overall_score,
        "spans": [_span_doc(s) for s in record.spans],
    }


def to_json(records: list[ExportRecord]) -> str:
    """Serialize records to one JSON document; refuses any invalid record."""
    for i, record in enumerate(records):
        validate_record(record, i)
    doc = {
        "format_version": FORMAT_VERSION,
        "span_unit": SPAN_UNIT,
        "records": [_record_doc(r) for r in records],
    }
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))


def _opt(value: int | None) -> str:
    return "" if value is None else str(value)


def to_csv(records: list[ExportRecord]) -> str:
    """RFC 4180 CSV, one row per span; spanless records emit one bare row."""
    for i, record in enumerate(records):
        validate_record(record, i)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(CSV_HEADER)
    for record in records:
        head = [
            record.pair_id,
            record.source_lang,
            record.target_lang,
            record.source_text,
            record.mt_text,
            record.corrected_text,
            record.annotator_id,
            _opt(record.overall_score),
        ]
        if not record.spans:
            writer.writerow(head + [""] * 8)
            continue
        for span in record.spans:
            writer.writerow(
                head
                + [
                    span.category,
                    span.severity,
                    _opt(span.source_start),
                    _opt(span.source_end),
                    str(span.translation_start),
                    str(span.translation_end),
                    span.explanation,
                    span.provenance,
                ]
            )
    return out.getvalue()


def _require(doc: dict, key: str, index: int):
    if key not in doc:
        raise ExportValidationError(index, "structure", f"missing field {key!r}")
    return doc[key]


def _parse_opt_int(value: object, key: str, index: int) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ExportValidationError(index, "structure", f"{key} must be an integer or null")
    return value


def from_json(document: str) -> list[ExportRecord]:
    """Inverse of to_json; every record is re-validated on load."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ExportError(f"malformed JSON: {exc.msg} at position {exc.pos}") from exc
    if not isinstance(doc, dict):
        raise ExportError("document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ExportVersionError(version)
    raw_records = doc.get("records")
    if not isinstance(raw_records, list):
        raise ExportError("records must be an array")

    records: list[ExportRecord] = []
    for i, raw in enumerate(raw_records):
        if not isinstance(raw, dict):
            raise ExportValidationError(i, "structure", "record is not an object")
        raw_spans = raw.get("spans", [])
        if not isinstance(raw_spans, list):
            raise ExportValidationError(i, "structure", "spans must be an array")
        spans = []
        for s in raw_spans:
            if not isinstance(s, dict):
                raise ExportValidationError(i, "structure", "span is not an object")
            spans.append(
                ExportSpan(
                    category=str(_require(s, "category", i)),
                    severity=str(_require(s, "severity", i)),
                    source_start=_parse_opt_int(s.get("source_start"), "source_start", i),
                    source_end=_parse_opt_int(s.get("source_end"), "source_end", i),
                    translation_start=_require(s, "translation_start", i),
                    translation_end=_require(s, "translation_end", i),
                    explanation=str(s.get("explanation") or ""),
                    provenance=str(_require(s, "provenance", i)),
                )
            )
        record = ExportRecord(
            pair_id=str(_require(raw, "pair_id", i)),
            source_lang=str(_require(raw, "source_lang", i)),
            target_lang=str(_require(raw, "target_lang", i)),
            source_text=str(_require(raw, "source_text", i)),
            mt_text=str(_require(raw, "mt_text", i)),
            corrected_text=str(_require(raw, "corrected_text", i)),
            annotator_id=str(_require(raw, "annotator_id", i)),
            overall_score=_parse_opt_int(raw.get("overall_score"), "overall_score", i),
            spans=tuple(spans),
        )
        validate_record(record, i)
        records.append(record)
    return records
