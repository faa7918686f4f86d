"""Error-span data model and Unicode code-point arithmetic.

All indices everywhere in this package count Unicode code points (what
Python's ``len`` and slicing give you on ``str``), never bytes, UTF-16
units, or grapheme clusters. End indices are exclusive.
"""

from __future__ import annotations

import enum
import uuid
from dataclasses import dataclass, field, replace


class ErrorCategory(enum.Enum):
    """The eight supported error labels. Nothing else parses."""

    ADDITION = "Addition"
    OMISSION = "Omission"
    MISTRANSLATION = "Mistranslation"
    UNTRANSLATED = "Untranslated"
    GRAMMAR = "Grammar"
    SPELLING = "Spelling"
    TYPOGRAPHY = "Typography"
    UNINTELLIGIBLE = "Unintelligible"

    @classmethod
    def from_text(cls, text: str) -> "ErrorCategory":
        for member in cls:
            if member.value.lower() == text.strip().lower():
                return member
        raise ValueError(f"unknown error category: {text!r}")


class Severity(enum.Enum):
    MINOR = "Minor"
    MAJOR = "Major"

    @classmethod
    def from_text(cls, text: str) -> "Severity":
        for member in cls:
            if member.value.lower() == text.strip().lower():
                return member
        raise ValueError(f"unknown severity: {text!r}")


class Provenance(enum.Enum):
    MODEL = "model"
    HUMAN = "human"
    HUMAN_EDITED_MODEL = "human_edited_model"

    @classmethod
    def from_text(cls, text: str) -> "Provenance":
        for member in cls:
            if member.value == text.strip().lower():
                return member
        raise ValueError(f"unknown provenance: {text!r}")


class PairStatus(enum.Enum):
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"

    @property
    def rank(self) -> int:
        return _STATUS_ORDER[self]


_STATUS_ORDER = {
    PairStatus.PENDING: 0,
    PairStatus.IN_PROGRESS: 1,
    PairStatus.COMPLETED: 2,
}


class SpanError(Exception):
    """Base class for span-arithmetic failures."""


class BoundsError(SpanError):
    def __init__(self, index: int, limit: int, what: str = "index"):
        self.index = index
        self.limit = limit
        super().__init__(f"{what} {index} out of bounds for text of length {limit}")


class OverlapError(SpanError):
    def __init__(self, span_ids: tuple[str, ...], side: str):
        self.span_ids = span_ids
        self.side = side
        ids = ", ".join(span_ids)
        super().__init__(f"{side} ranges overlap between spans: {ids}")


class SpanNotFoundError(SpanError):
    def __init__(self, span_id: str):
        self.span_id = span_id
        super().__init__(f"no span with id {span_id!r}")


class AnnotationInvalidError(SpanError):
    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__(
            "annotation failed validation: "
            + "; ".join(v.message for v in violations)
        )


@dataclass(frozen=True)
class CharRange:
    """Half-open [start, end) range in code points. Never empty."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0:
            raise ValueError(f"start must be >= 0, got {self.start}")
        if self.end <= self.start:
            raise ValueError(f"end must be > start, got [{self.start}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "CharRange") -> bool:
        return self.start < other.end and other.start < self.end

    def shifted(self, delta: int) -> "CharRange":
        return CharRange(self.start + delta, self.end + delta)


@dataclass(frozen=True)
class Splice:
    """Replace [start, end) with ``replacement``. start == end inserts."""

    start: int
    end: int
    replacement: str = ""

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad splice range [{self.start}, {self.end})")


@dataclass(frozen=True)
class ErrorSpan:
    span_id: str
    category: ErrorCategory
    severity: Severity
    translation_range: CharRange
    source_range: CharRange | None = None
    explanation: str = ""
    provenance: Provenance = Provenance.HUMAN

    def __post_init__(self) -> None:
        # Model output always maps back to the source; only humans may skip it.
        if self.provenance is Provenance.MODEL and self.source_range is None:
            raise ValueError("model spans require a source_range")

    def to_dict(self) -> dict:
        return {
            "span_id": self.span_id,
            "category": self.category.value,
            "severity": self.severity.value,
            "source_start": self.source_range.start if self.source_range else None,
            "source_end": self.source_range.end if self.source_range else None,
            "translation_start": self.translation_range.start,
            "translation_end": self.translation_range.end,
            "explanation": self.explanation,
            "provenance": self.provenance.value,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ErrorSpan":
        source_range = None
        if doc.get("source_start") is not None or doc.get("source_end") is not None:
            source_range = CharRange(int(doc["source_start"]), int(doc["source_end"]))
        return cls(
            span_id=str(doc["span_id"]),
            category=ErrorCategory.from_text(doc["category"]),
            severity=Severity.from_text(doc["severity"]),
            translation_range=CharRange(
                int(doc["translation_start"]), int(doc["translation_end"])
            ),
            source_range=source_range,
            explanation=str(doc.get("explanation") or ""),
            provenance=Provenance.from_text(doc.get("provenance") or "human"),
        )


@dataclass(frozen=True)
class TranslationPair:
    pair_id: str
    dataset_id: str
    source_lang: str
    target_lang: str
    source_text: str
    mt_text: str
    status: PairStatus = PairStatus.PENDING

    def __post_init__(self) -> None:
        if not self.pair_id or not self.dataset_id:
            raise ValueError("pair_id and dataset_id must be non-empty")
        if not self.source_text:
            raise ValueError("source_text must be non-empty")
        if not self.mt_text:
            raise ValueError("mt_text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "dataset_id": self.dataset_id,
            "source_lang": self.source_lang,
            "target_lang": self.target_lang,
            "source_text": self.source_text,
            "mt_text": self.mt_text,
            "status": self.status.value,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TranslationPair":
        return cls(
            pair_id=doc["pair_id"],
            dataset_id=doc["dataset_id"],
            source_lang=doc["source_lang"],
            target_lang=doc["target_lang"],
            source_text=doc["source_text"],
            mt_text=doc["mt_text"],
            status=PairStatus(doc.get("status", "pending")),
        )


def status_can_advance(old: PairStatus, new: PairStatus) -> bool:
    """Forward-only workflow; going back requires an explicit admin reset."""
    return new.rank >= old.rank


@dataclass(frozen=True)
class Annotation:
    pair_id: str
    annotator_id: str
    corrected_text: str
    spans: tuple[ErrorSpan, ...] = ()
    overall_score: int | None = None
    created_at: str = ""
    updated_at: str = ""
    version: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.spans, tuple):
            object.__setattr__(self, "spans", tuple(self.spans))
        if self.overall_score is not None:
            score = self.overall_score
            if isinstance(score, bool) or not isinstance(score, int) or not 0 <= score <= 100:
                raise ValueError(f"overall_score must be an integer in [0, 100], got {score!r}")
        if self.version < 0:
            raise ValueError("version must be >= 0")

    def span_by_id(self, span_id: str) -> ErrorSpan | None:
        for span in self.spans:
            if span.span_id == span_id:
                return span
        return None

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "annotator_id": self.annotator_id,
            "corrected_text": self.corrected_text,
            "spans": [s.to_dict() for s in self.spans],
            "overall_score": self.overall_score,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Annotation":
        return cls(
            pair_id=doc["pair_id"],
            annotator_id=doc["annotator_id"],
            corrected_text=doc["corrected_text"],
            spans=tuple(ErrorSpan.from_dict(s) for s in doc.get("spans", [])),
            overall_score=doc.get("overall_score"),
            created_at=doc.get("created_at", ""),
            updated_at=doc.get("updated_at", ""),
            version=int(doc.get("version", 0)),
        )


@dataclass(frozen=True)
class Violation:
    """One broken invariant, as data. Validation never raises on bad spans."""

    rule: str
    span_ids: tuple[str, ...]
    indices: tuple[int, ...]
    message: str

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "span_ids": list(self.span_ids),
            "indices": list(self.indices),
            "message": self.message,
        }


def new_span_id() -> str:
    return uuid.uuid4().hex


def code_point_length(text: str) -> int:
    """Length in Unicode code points."""
    return len(text)


def extract_span_text(text: str, rng: CharRange) -> str:
    """Code-point slice [start, end); raises BoundsError when out of range."""
    if rng.end > len(text):
        raise BoundsError(rng.end, len(text), what="end index")
    return text[rng.start : rng.end]


def validate_annotation(annotation: Annotation, pair: TranslationPair) -> list[Violation]:
    """Check every span invariant; returns violations instead of raising.

    Pure function: inspects, never mutates. The caller must pass the pair
    the annotation belongs to.
    """
    if annotation.pair_id != pair.pair_id:
        raise ValueError(
            f"annotation is for pair {annotation.pair_id!r}, not {pair.pair_id!r}"
        )

    violations: list[Violation] = []
    corrected_len = len(annotation.corrected_text)
    source_len = len(pair.source_text)

    seen_ids: set[str] = set()
    for span in annotation.spans:
        if span.span_id in seen_ids:
            violations.append(
                Violation(
                    rule="duplicate_span_id",
                    span_ids=(span.span_id,),
                    indices=(),
                    message=f"span id {span.span_id!r} appears more than once",
                )
            )
        seen_ids.add(span.span_id)

        tr = span.translation_range
        if tr.end > corrected_len:
            violations.append(
                Violation(
                    rule="translation_bounds",
                    span_ids=(span.span_id,),
                    indices=(tr.start, tr.end, corrected_len),
                    message=(
                        f"span {span.span_id!r} translation range [{tr.start}, {tr.end}) "
                        f"exceeds corrected text length {corrected_len}"
                    ),
                )
            )
        sr = span.source_range
        if sr is not None and sr.end > source_len:
            violations.append(
                Violation(
                    rule="source_bounds",
                    span_ids=(span.span_id,),
                    indices=(sr.start, sr.end, source_len),
                    message=(
                        f"span {span.span_id!r} source range [{sr.start}, {sr.end}) "
                        f"exceeds source text length {source_len}"
                    ),
                )
            )

    for i, a in enumerate(annotation.spans):
        for b in annotation.spans[i + 1 :]:
            if a.translation_range.overlaps(b.translation_range):
                lo = max(a.translation_range.start, b.translation_range.start)
                hi = min(a.translation_range.end, b.translation_range.end)
                violations.append(
                    Violation(
                        rule="translation_overlap",
                        span_ids=(a.span_id, b.span_id),
                        indices=(lo, hi),
                        message=(
                            f"spans {a.span_id!r} and {b.span_id!r} overlap on the "
                            f"translation side over [{lo}, {hi})"
                        ),
                    )
                )
            if (
                a.source_range is not None
                and b.source_range is not None
                and a.source_range.overlaps(b.source_range)
            ):
                lo = max(a.source_range.start, b.source_range.start)
                hi = min(a.source_range.end, b.source_range.end)
                violations.append(
                    Violation(
                        rule="source_overlap",
                        span_ids=(a.span_id, b.span_id),
                        indices=(lo, hi),
                        message=(
                            f"spans {a.span_id!r} and {b.span_id!r} overlap on the "
                            f"source side over [{lo}, {hi})"
                        ),
                    )
                )
    return violations


def upsert_span(
    annotation: Annotation,
    span: ErrorSpan,
    *,
    pair: TranslationPair | None = None,
) -> Annotation:
    """Insert a new span or replace the one with the same span_id.

    Replacing a model-predicted span marks the result human_edited_model so
    the edit history survives export. Rejected wholesale (exception, input
    untouched) when the result would break bounds or overlap invariants.
    Pass ``pair`` to also enforce source-side bounds.
    """
    corrected_len = len(annotation.corrected_text)
    if span.translation_range.end > corrected_len:
        raise BoundsError(span.translation_range.end, corrected_len, what="end index")
    if pair is not None and span.source_range is not None:
        if span.source_range.end > len(pair.source_text):
            raise BoundsError(
                span.source_range.end, len(pair.source_text), what="source end index"
            )

    existing = annotation.span_by_id(span.span_id)
    if existing is not None and existing.provenance in (
        Provenance.MODEL,
        Provenance.HUMAN_EDITED_MODEL,
    ):
        span = replace(span, provenance=Provenance.HUMAN_EDITED_MODEL)

    others = tuple(s for s in annotation.spans if s.span_id != span.span_id)
    t_conflicts = [
        s.span_id for s in others if s.translation_range.overlaps(span.translation_range)
    ]
    if t_conflicts:
        raise OverlapError(tuple([span.span_id, *t_conflicts]), side="translation")
    if span.source_range is not None:
        s_conflicts = [
            s.span_id
            for s in others
            if s.source_range is not None and s.source_range.overlaps(span.source_range)
        ]
        if s_conflicts:
            raise OverlapError(tuple([span.span_id, *s_conflicts]), side="source")

    result = replace(annotation, spans=tuple([*others, span]))
    if pair is not None:
        violations = validate_annotation(result, pair)
        if violations:
            raise AnnotationInvalidError(violations)
    return result


def delete_span(annotation: Annotation, span_id: str) -> Annotation:
    """Remove one span; every other span is untouched."""
    if annotation.span_by_id(span_id) is None:
        raise SpanNotFoundError(span_id)
    return replace(
        annotation,
        spans=tuple(s for s in annotation.spans if s.span_id != span_id),
    )


def _trim_splice(text: str, splice: Splice) -> Splice:
    """Shrink a splice by the common prefix/suffix of old and new text.

    An edit that retypes unchanged characters must not disturb spans over
    them; in particular a full identity splice trims to a no-op.
    """
    old = text[splice.start : splice.end]
    new = splice.replacement
    prefix = 0
    limit = min(len(old), len(new))
    while prefix < limit and old[prefix] == new[prefix]:
        prefix += 1
    suffix = 0
    limit -= prefix
    while suffix < limit and old[len(old) - 1 - suffix] == new[len(new) - 1 - suffix]:
        suffix += 1
    return Splice(
        start=splice.start + prefix,
        end=splice.end - suffix,
        replacement=new[prefix : len(new) - suffix],
    )


def apply_edit(
    annotation: Annotation, splice: Splice
) -> tuple[Annotation, list[str], list[str]]:
    """Apply a text edit to corrected_text and re-anchor translation ranges.

    Returns (new annotation, dropped span ids, truncated span ids). Spans
    strictly before the edit stay put; spans strictly after shift by the
    length delta; spans swallowed by the edit are dropped; spans cut by one
    edge keep their surviving part; a span enclosing the edit absorbs it.
    Source ranges never move: they index the source text, which edits to
    the corrected text cannot touch.
    """
    text = annotation.corrected_text
    if splice.end > len(text):
        raise BoundsError(splice.end, len(text), what="splice end")

    eff = _trim_splice(text, splice)
    a, b = eff.start, eff.end
    delta = len(eff.replacement) - (b - a)
    if a == b and not eff.replacement:
        return annotation, [], []

    new_text = text[:a] + eff.replacement + text[b:]

    kept: list[ErrorSpan] = []
    dropped: list[str] = []
    truncated: list[str] = []
    for span in annotation.spans:
        s, e = span.translation_range.start, span.translation_range.end
        if e <= a:
            kept.append(span)
        elif s >= b:
            kept.append(replace(span, translation_range=span.translation_range.shifted(delta)))
        elif s >= a and e <= b:
            dropped.append(span.span_id)
        else:
            if s < a and e > b:
                new_range = CharRange(s, e + delta)
            elif s < a:
                new_range = CharRange(s, a)
            else:
                new_range = CharRange(b + delta, e + delta)
            if new_range != span.translation_range:
                truncated.append(span.span_id)
            kept.append(replace(span, translation_range=new_range))

    result = replace(annotation, corrected_text=new_text, spans=tuple(kept))
    return result, dropped, truncated


def merge_suggestions(
    model_spans: list[ErrorSpan] | tuple[ErrorSpan, ...],
    human_spans: list[ErrorSpan] | tuple[ErrorSpan, ...],
) -> list[ErrorSpan]:
    """Union of model and human spans; the human wins every conflict.

    A model span is discarded when it overlaps any human span on either
    side, so the merged set keeps both non-overlap invariants. Output is
    ordered by translation start. Idempotent: feeding the result back in as
    the model side changes nothing.
    """
    merged = list(human_spans)
    for model_span in model_spans:
        conflict = False
        for human_span in human_spans:
            if model_span.translation_range.overlaps(human_span.translation_range):
                conflict = True
                break
            if (
                model_span.source_range is not None
                and human_span.source_range is not None
                and model_span.source_range.overlaps(human_span.source_range)
            ):
                conflict = True
                break
        if not conflict:
            merged.append(model_span)
    merged.sort(key=lambda s: s.translation_range.start)
    return merged
