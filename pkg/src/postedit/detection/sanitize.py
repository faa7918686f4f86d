"""Turn untrusted raw engine output into validated error spans.

Engines miscount indices and invent labels; nothing they emit is trusted
until it survives this pass. The emitted original_text is treated as ground
truth over the emitted source indices, because models quote text far more
reliably than they count characters.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..spans import (
    CharRange,
    ErrorCategory,
    ErrorSpan,
    Provenance,
    Severity,
    TranslationPair,
)
from .wire import RawDetectedSpan

# End indices this far past the end of the text are repaired, not rejected:
# off-by-one and inclusive-end confusion are endemic in model output.
CLAMP_TOLERANCE = 2


@dataclass(frozen=True)
class SanitizationReport:
    """Outcome tally: accepted + len(dropped) equals the raw input count.

    A span that needed both a source relocation and an end clamp counts
    once, as relocated, keeping relocated + clamped <= accepted.
    """

    accepted: int
    relocated: int
    clamped: int
    dropped: tuple[tuple[int, str], ...]

    def __post_init__(self) -> None:
        if self.relocated + self.clamped > self.accepted:
            raise ValueError("repaired spans cannot outnumber accepted spans")

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "relocated": self.relocated,
            "clamped": self.clamped,
            "dropped": [{"raw_index": i, "reason": reason} for i, reason in self.dropped],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SanitizationReport":
        return cls(
            accepted=doc["accepted"],
            relocated=doc["relocated"],
            clamped=doc["clamped"],
            dropped=tuple((d["raw_index"], d["reason"]) for d in doc["dropped"]),
        )


@dataclass(frozen=True)
class _Candidate:
    raw_index: int
    span: ErrorSpan
    relocated: bool
    clamped: bool


def _resolve_source_range(
    raw: RawDetectedSpan, source_text: str
) -> tuple[CharRange | None, bool, str]:
    """Returns (range, relocated, drop_reason). Range is None iff dropped."""
    try:
        rng = CharRange(raw.start_index_orig, raw.end_index_orig)
    except ValueError:
        rng = None
    if rng is not None and rng.end <= len(source_text):
        if source_text[rng.start : rng.end] == raw.original_text:
            return rng, False, ""
    if not raw.original_text:
        return None, False, "empty original_text"
    found = source_text.find(raw.original_text)
    if found == -1:
        return None, False, "source text mismatch"
    return CharRange(found, found + len(raw.original_text)), True, ""


def _resolve_translation_range(
    raw: RawDetectedSpan, mt_text: str
) -> tuple[CharRange | None, bool, str]:
    """Returns (range, clamped, drop_reason)."""
    start = raw.start_index_translation
    end = raw.end_index_translation
    limit = len(mt_text)
    if start < 0 or end <= start:
        return None, False, "invalid translation range"
    if end > limit:
        if end - limit > CLAMP_TOLERANCE or start >= limit:
            return None, False, "translation range out of bounds"
        return CharRange(start, limit), True, ""
    return CharRange(start, end), False, ""


def sanitize_spans(
    raw_spans: list[RawDetectedSpan], pair: TranslationPair
) -> tuple[list[ErrorSpan], SanitizationReport]:
    """Validate, repair, and deduplicate raw spans against the pair texts.

    Deterministic: the same input always yields the same spans (including
    ids) and the same report. Overlap conflicts keep the higher-severity
    span, then the earlier start. All failures become report entries, never
    exceptions.
    """
    candidates: list[_Candidate] = []
    dropped: list[tuple[int, str]] = []

    for idx, raw in enumerate(raw_spans):
        try:
            category = ErrorCategory.from_text(raw.error_type)
        except ValueError:
            dropped.append((idx, f"unknown error_type {raw.error_type!r}"))
            continue
        try:
            severity = Severity.from_text(raw.error_severity)
        except ValueError:
            dropped.append((idx, f"unknown error_severity {raw.error_severity!r}"))
            continue

        source_range, relocated, reason = _resolve_source_range(raw, pair.source_text)
        if source_range is None:
            dropped.append((idx, reason))
            continue

        translation_range, clamped, reason = _resolve_translation_range(raw, pair.mt_text)
        if translation_range is None:
            dropped.append((idx, reason))
            continue

        candidates.append(
            _Candidate(
                raw_index=idx,
                span=ErrorSpan(
                    span_id=f"det:{pair.pair_id}:{idx}",
                    category=category,
                    severity=severity,
                    translation_range=translation_range,
                    source_range=source_range,
                    explanation=raw.correct_text,
                    provenance=Provenance.MODEL,
                ),
                relocated=relocated,
                clamped=clamped,
            )
        )

    # Higher severity wins conflicts, then earlier start, then input order.
    priority = sorted(
        candidates,
        key=lambda c: (
            0 if c.span.severity is Severity.MAJOR else 1,
            c.span.translation_range.start,
            c.raw_index,
        ),
    )
    kept: list[_Candidate] = []
    for candidate in priority:
        conflict = False
        for other in kept:
            if candidate.span.translation_range.overlaps(other.span.translation_range):
                conflict = True
                break
            if candidate.span.source_range.overlaps(other.span.source_range):
                conflict = True
                break
        if conflict:
            dropped.append((candidate.raw_index, "overlaps a higher-priority span"))
        else:
            kept.append(candidate)

    kept.sort(key=lambda c: c.span.translation_range.start)
    relocated_count = sum(1 for c in kept if c.relocated)
    clamped_count = sum(1 for c in kept if c.clamped and not c.relocated)
    report = SanitizationReport(
        accepted=len(kept),
        relocated=relocated_count,
        clamped=clamped_count,
        dropped=tuple(sorted(dropped)),
    )
    return [c.span for c in kept], report
