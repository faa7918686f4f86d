from __future__ import annotations

import pytest

from postedit.spans import (
    Annotation,
    CharRange,
    ErrorCategory,
    ErrorSpan,
    Provenance,
    Severity,
    TranslationPair,
)

# The bundled demo sentence pair; "Today" copies into the MT as "Todayen".
SAMPLE_SOURCE = "Today Romani is spoken by small groups in 42 European countries."
SAMPLE_MT = "Todayen Romani は欧州の42か国で小グループで語られています."


@pytest.fixture
def sample_pair() -> TranslationPair:
    return TranslationPair(
        pair_id="p1",
        dataset_id="d1",
        source_lang="en",
        target_lang="ja",
        source_text=SAMPLE_SOURCE,
        mt_text=SAMPLE_MT,
    )


def make_span(
    span_id: str,
    t_start: int,
    t_end: int,
    s_start: int | None = None,
    s_end: int | None = None,
    category: ErrorCategory = ErrorCategory.GRAMMAR,
    severity: Severity = Severity.MINOR,
    provenance: Provenance = Provenance.HUMAN,
    explanation: str = "",
) -> ErrorSpan:
    source_range = CharRange(s_start, s_end) if s_start is not None else None
    return ErrorSpan(
        span_id=span_id,
        category=category,
        severity=severity,
        translation_range=CharRange(t_start, t_end),
        source_range=source_range,
        explanation=explanation,
        provenance=provenance,
    )


def make_annotation(pair: TranslationPair, *spans: ErrorSpan, corrected: str | None = None) -> Annotation:
    return Annotation(
        pair_id=pair.pair_id,
        annotator_id="anno-1",
        corrected_text=pair.mt_text if corrected is None else corrected,
        spans=tuple(spans),
    )
