#!/usr/bin/env python3
"""Regenerate the shared fixtures consumed by both test suites.

Expected outcomes in the validation corpus are fixed by construction (each
case is built to be valid or invalid for a stated reason); the script
cross-checks them against the server-side validator before writing, so a
drift in either place fails loudly here rather than silently in CI.

Run from the repository root:  python3 scripts/gen_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from postedit.spans import (  # noqa: E402
    Annotation,
    CharRange,
    ErrorSpan,
    Splice,
    TranslationPair,
    apply_edit,
    extract_span_text,
    validate_annotation,
)

FIXTURES = REPO / "fixtures"

PALETTE = {
    "Addition": "#2ea043",
    "Omission": "#e5534b",
    "Mistranslation": "#d29922",
    "Untranslated": "#58a6ff",
    "Grammar": "#bc8cff",
    "Spelling": "#39c5cf",
    "Typography": "#ff7eb6",
    "Unintelligible": "#f0883e",
}

ASCII_SOURCE = "Today Romani is spoken by small groups in 42 European countries."
ASCII_MT = "Todayen Romani は欧州の42か国で小グループで語られています."
CJK_TEXT = "日本語のテキストを編集する場合も同じです"  # 20 code points
EMOJI_TEXT = "fix 🚀 the 🎯 rocket"  # astral chars are 1 code point each


def span_doc(
    span_id: str,
    t_start: int,
    t_end: int,
    s_start: int | None = None,
    s_end: int | None = None,
    category: str = "Grammar",
    severity: str = "Minor",
    provenance: str = "human",
    explanation: str = "",
) -> dict:
    return {
        "span_id": span_id,
        "category": category,
        "severity": severity,
        "source_start": s_start,
        "source_end": s_end,
        "translation_start": t_start,
        "translation_end": t_end,
        "explanation": explanation,
        "provenance": provenance,
    }


def case(
    case_id: str,
    valid: bool,
    spans: list[dict],
    corrected: str = ASCII_MT,
    source: str = ASCII_SOURCE,
    score: int | None = None,
    note: str = "",
) -> dict:
    return {
        "case_id": case_id,
        "note": note,
        "expected_valid": valid,
        "pair": {"source_text": source, "mt_text": ASCII_MT},
        "annotation": {
            "corrected_text": corrected,
            "overall_score": score,
            "spans": spans,
        },
    }


def build_validation_corpus() -> list[dict]:
    cases: list[dict] = []
    mt_len = len(ASCII_MT)
    cjk_len = len(CJK_TEXT)
    emoji_len = len(EMOJI_TEXT)

    # Valid shapes.
    cases.append(case("valid-single-human", True, [span_doc("a", 0, 7)]))
    cases.append(
        case("valid-single-model", True,
             [span_doc("a", 0, 7, 0, 5, category="Spelling", provenance="model")])
    )
    cases.append(
        case("valid-single-edited-model", True,
             [span_doc("a", 0, 7, 0, 5, provenance="human_edited_model")])
    )
    cases.append(
        case("valid-edited-model-no-source", True,
             [span_doc("a", 0, 7, provenance="human_edited_model")],
             note="only plain model output must carry a source range")
    )
    cases.append(
        case("valid-three-disjoint", True,
             [span_doc("a", 0, 4), span_doc("b", 6, 9), span_doc("c", 12, 20)])
    )
    cases.append(
        case("valid-adjacent", True, [span_doc("a", 0, 5), span_doc("b", 5, 9)],
             note="half-open ranges: touching spans do not overlap")
    )
    cases.append(
        case("valid-adjacent-source", True,
             [span_doc("a", 0, 4, 0, 3), span_doc("b", 6, 9, 3, 8)])
    )
    cases.append(case("valid-span-at-text-end", True, [span_doc("a", mt_len - 3, mt_len)]))
    cases.append(case("valid-full-text-span", True, [span_doc("a", 0, mt_len)]))
    for i, category in enumerate(PALETTE):
        cases.append(
            case(f"valid-category-{category.lower()}", True,
                 [span_doc("a", i, i + 2, category=category)])
        )
    cases.append(case("valid-severity-major", True, [span_doc("a", 0, 3, severity="Major")]))
    cases.append(case("valid-score-0", True, [span_doc("a", 0, 3)], score=0))
    cases.append(case("valid-score-100", True, [span_doc("a", 0, 3)], score=100))
    cases.append(case("valid-no-spans", True, []))
    cases.append(
        case("valid-cjk-span", True, [span_doc("a", 3, 8)], corrected=CJK_TEXT,
             note="indices count code points, not UTF-16 units")
    )
    cases.append(
        case("valid-cjk-end-boundary", True, [span_doc("a", cjk_len - 2, cjk_len)],
             corrected=CJK_TEXT)
    )
    cases.append(
        case("valid-emoji-span", True, [span_doc("a", 4, 5)], corrected=EMOJI_TEXT,
             note="astral emoji is one code point")
    )
    cases.append(
        case("valid-emoji-full", True, [span_doc("a", 0, emoji_len)], corrected=EMOJI_TEXT)
    )
    cases.append(
        case("valid-emoji-source", True,
             [span_doc("a", 0, 3, 4, 5, provenance="model")], source=EMOJI_TEXT,
             note="source-side emoji indexing also counts code points")
    )

    # Bounds violations.
    cases.append(
        case("invalid-end-past-text", False, [span_doc("a", 0, mt_len + 1)])
    )
    cases.append(
        case("invalid-end-far-past-text", False, [span_doc("a", 5, 9000)])
    )
    cases.append(
        case("invalid-cjk-utf16-length", False,
             [span_doc("a", 0, len(EMOJI_TEXT) + 2)], corrected=EMOJI_TEXT,
             note="UTF-16 length of this text exceeds its code-point length; "
                  "clients measuring .length would wrongly accept this")
    )
    cases.append(
        case("invalid-source-end-past-text", False,
             [span_doc("a", 0, 3, 0, len(ASCII_SOURCE) + 1, provenance="model")])
    )

    # Malformed ranges.
    cases.append(case("invalid-empty-range", False, [span_doc("a", 4, 4)]))
    cases.append(case("invalid-reversed-range", False, [span_doc("a", 6, 2)]))
    cases.append(case("invalid-negative-start", False, [span_doc("a", -1, 4)]))
    cases.append(
        case("invalid-source-empty-range", False,
             [span_doc("a", 0, 3, 5, 5, provenance="model")])
    )
    cases.append(
        case("invalid-source-start-only", False,
             [{**span_doc("a", 0, 3), "source_start": 2, "source_end": None}],
             note="source indices must come as a pair")
    )

    # Overlaps.
    cases.append(
        case("invalid-overlap-partial", False,
             [span_doc("a", 0, 5), span_doc("b", 3, 8)])
    )
    cases.append(
        case("invalid-overlap-nested", False,
             [span_doc("a", 0, 10), span_doc("b", 2, 5)])
    )
    cases.append(
        case("invalid-overlap-identical", False,
             [span_doc("a", 2, 6), span_doc("b", 2, 6)])
    )
    cases.append(
        case("invalid-overlap-source-side", False,
             [span_doc("a", 0, 3, 0, 6), span_doc("b", 5, 8, 4, 9)],
             note="translation ranges disjoint, source ranges overlap")
    )
    cases.append(
        case("invalid-overlap-three-way", False,
             [span_doc("a", 0, 4), span_doc("b", 6, 12), span_doc("c", 3, 7)])
    )

    # Identity and taxonomy.
    cases.append(
        case("invalid-duplicate-span-id", False,
             [span_doc("dup", 0, 3), span_doc("dup", 5, 8)])
    )
    cases.append(
        case("invalid-model-without-source", False,
             [span_doc("a", 0, 7, provenance="model")])
    )
    cases.append(
        case("invalid-unknown-category", False, [span_doc("a", 0, 3, category="Fluency")])
    )
    cases.append(
        case("invalid-unknown-severity", False, [span_doc("a", 0, 3, severity="Critical")])
    )
    cases.append(
        case("invalid-unknown-provenance", False, [span_doc("a", 0, 3, provenance="robot")])
    )
    cases.append(
        case("valid-lowercase-category", True,
             [span_doc("a", 0, 3, category="grammar")],
             note="parse is case-insensitive; output is canonical-cased")
    )
    cases.append(
        case("valid-uppercase-severity", True,
             [span_doc("a", 0, 3, severity="MAJOR")])
    )
    cases.append(case("invalid-score-101", False, [span_doc("a", 0, 3)], score=101))
    cases.append(case("invalid-score-negative", False, [span_doc("a", 0, 3)], score=-1))
    cases.append(
        case("invalid-score-float", False, [span_doc("a", 0, 3)], score=50.5,
             note="scores are integers")
    )
    cases.append(
        case("invalid-float-indices", False,
             [{**span_doc("a", 0, 3), "translation_end": 3.5}])
    )
    cases.append(
        case("invalid-string-indices", False,
             [{**span_doc("a", 0, 3), "translation_start": "0"}])
    )
    cases.append(
        case("invalid-missing-category", False,
             [{k: v for k, v in span_doc("a", 0, 3).items() if k != "category"}])
    )

    # Mixed: one good span plus one bad span must reject the whole annotation.
    cases.append(
        case("invalid-one-bad-apple", False,
             [span_doc("a", 0, 4), span_doc("b", 6, mt_len + 5)])
    )
    cases.append(
        case("valid-many-categories", True,
             [span_doc(f"s{i}", i * 3, i * 3 + 2, category=cat)
              for i, cat in enumerate(PALETTE)])
    )
    return cases


def server_accepts(case_doc: dict) -> bool:
    """Reference classification with the service-side validator."""
    try:
        pair = TranslationPair(
            pair_id="fixture",
            dataset_id="fixture",
            source_lang="xx",
            target_lang="yy",
            source_text=case_doc["pair"]["source_text"],
            mt_text=case_doc["pair"]["mt_text"],
        )
        ann_doc = case_doc["annotation"]
        spans = []
        for s in ann_doc["spans"]:
            for key in ("translation_start", "translation_end", "source_start", "source_end"):
                value = s.get(key)
                if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
                    raise ValueError(f"{key} must be an integer")
            spans.append(ErrorSpan.from_dict(s))
        annotation = Annotation(
            pair_id="fixture",
            annotator_id="fixture",
            corrected_text=ann_doc["corrected_text"],
            spans=tuple(spans),
            overall_score=ann_doc.get("overall_score"),
        )
    except (ValueError, TypeError, KeyError):
        return False
    return validate_annotation(annotation, pair) == []


def build_highlight_cases() -> list[dict]:
    specs = [
        {
            "case_id": "ascii-cjk-pair",
            "source_text": ASCII_SOURCE,
            "translation_text": ASCII_MT,
            "spans": [
                span_doc("a", 0, 7, 0, 5, category="Spelling", provenance="model",
                         explanation="token copied"),
                span_doc("b", 8, 14, 6, 12, category="Untranslated", provenance="model"),
            ],
        },
        {
            "case_id": "cjk-only",
            "source_text": CJK_TEXT,
            "translation_text": CJK_TEXT,
            "spans": [
                span_doc("a", 0, 3, 4, 8, category="Grammar", provenance="model"),
                span_doc("b", 10, 15, None, None, category="Omission"),
            ],
        },
        {
            "case_id": "emoji-boundaries",
            "source_text": EMOJI_TEXT,
            "translation_text": EMOJI_TEXT,
            "spans": [
                span_doc("a", 4, 5, 4, 5, category="Typography", provenance="model"),
                span_doc("b", 6, 9, None, None, category="Addition"),
                span_doc("c", 10, 11, None, None, category="Mistranslation"),
            ],
        },
        {
            "case_id": "mixed-width-tail",
            "source_text": "abc 🚀🚀 def",
            "translation_text": "日本 🚀 語 end",
            "spans": [
                span_doc("a", 3, 4, 4, 6, category="Unintelligible", provenance="model"),
                span_doc("b", 7, 10, None, None, category="Spelling"),
            ],
        },
    ]
    for spec in specs:
        expected = []
        for s in spec["spans"]:
            source_sub = None
            if s["source_start"] is not None:
                source_sub = extract_span_text(
                    spec["source_text"], CharRange(s["source_start"], s["source_end"])
                )
            expected.append(
                {
                    "span_id": s["span_id"],
                    "source_substring": source_sub,
                    "translation_substring": extract_span_text(
                        spec["translation_text"],
                        CharRange(s["translation_start"], s["translation_end"]),
                    ),
                    "color": PALETTE[s["category"]],
                }
            )
        spec["expected"] = expected
    return specs


def build_edit_vectors() -> list[dict]:
    specs = [
        ("shift-left", "hello world", [("a", 6, 11)], (0, 5, "hi")),
        ("truncate-left-survivor", "abcdef", [("a", 2, 5)], (3, 6, "XY")),
        ("drop-inside", "abcdef", [("a", 2, 4)], (1, 5, "Z")),
        ("truncate-right-survivor", "abcdefgh", [("a", 2, 6)], (0, 4, "Q")),
        ("enclosing-span-absorbs", "abcdefgh", [("a", 1, 7)], (3, 5, "XYZ")),
        ("identity-noop", "abcdef", [("a", 2, 5)], (1, 5, "bcde")),
        ("pure-insert-before", "abcde", [("a", 2, 4)], (0, 0, "zz")),
        ("pure-insert-at-start-of-span", "abcde", [("a", 2, 4)], (2, 2, "x")),
        ("pure-insert-at-end-of-span", "abcde", [("a", 2, 4)], (4, 4, "x")),
        ("pure-insert-inside-span", "abcde", [("a", 1, 4)], (2, 2, "xx")),
        ("delete-after-span", "abcdef", [("a", 0, 2)], (3, 5, "")),
        ("delete-whole-text-span", "abc", [("a", 0, 3)], (0, 3, "")),
        ("retyped-prefix-spares-span", "hello", [("a", 3, 5)], (0, 5, "hxllo")),
        ("retyped-suffix-spares-span", "hello", [("a", 0, 2)], (0, 5, "hellp")),
        ("multi-span-mixed", "0123456789", [("a", 0, 2), ("b", 3, 5), ("c", 7, 9)], (3, 6, "X")),
        ("cjk-shift", CJK_TEXT, [("a", 5, 9)], (0, 2, "")),
        ("cjk-grow", CJK_TEXT, [("a", 2, 6)], (3, 3, "挿入")),
        ("emoji-delete-through-span", EMOJI_TEXT, [("a", 4, 5), ("b", 10, 12)], (2, 6, "")),
        ("replace-at-end", "abcdef", [("a", 1, 3)], (4, 6, "ZW")),
        ("empty-replacement-noop-splice", "abcdef", [("a", 2, 4)], (3, 3, "")),
    ]
    vectors = []
    for case_id, text, span_tuples, (start, end, replacement) in specs:
        spans = tuple(
            ErrorSpan.from_dict(span_doc(sid, s, e)) for sid, s, e in span_tuples
        )
        annotation = Annotation(
            pair_id="v", annotator_id="v", corrected_text=text, spans=spans
        )
        result, dropped, truncated = apply_edit(annotation, Splice(start, end, replacement))
        vectors.append(
            {
                "case_id": case_id,
                "text": text,
                "spans": [
                    {"span_id": s.span_id, "start": s.translation_range.start,
                     "end": s.translation_range.end}
                    for s in spans
                ],
                "splice": {"start": start, "end": end, "replacement": replacement},
                "expected": {
                    "text": result.corrected_text,
                    "spans": [
                        {"span_id": s.span_id, "start": s.translation_range.start,
                         "end": s.translation_range.end}
                        for s in result.spans
                    ],
                    "dropped": dropped,
                    "truncated": truncated,
                },
            }
        )
    return vectors


def write(name: str, payload) -> None:
    path = FIXTURES / name
    path.write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {path.relative_to(REPO)}")


def main() -> int:
    FIXTURES.mkdir(exist_ok=True)
    corpus = build_validation_corpus()
    mismatches = [
        c["case_id"] for c in corpus if server_accepts(c) != c["expected_valid"]
    ]
    if mismatches:
        print(f"authoring bug: validator disagrees on {mismatches}", file=sys.stderr)
        return 1
    ids = [c["case_id"] for c in corpus]
    if len(set(ids)) != len(ids):
        print("authoring bug: duplicate case ids", file=sys.stderr)
        return 1
    write("palette.json", PALETTE)
    write("validation_corpus.json", corpus)
    write("highlight_cjk.json", build_highlight_cases())
    write("edit_vectors.json", build_edit_vectors())
    print(f"{len(corpus)} validation cases "
          f"({sum(c['expected_valid'] for c in corpus)} valid)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
