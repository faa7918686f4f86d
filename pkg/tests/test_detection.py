from __future__ import annotations

import json
from pathlib import Path

import httpx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postedit.detection import (
    DetectionFormatError,
    DetectionRequest,
    EngineConfig,
    EngineRegistry,
    EngineStatusError,
    EngineUnavailableError,
    RawDetectedSpan,
    ResponseParseError,
    ResponseSchemaError,
    StubEngine,
    UnknownEngineError,
    build_ec1_prompt,
    detect,
    parse_ec1_response,
    sanitize_spans,
    serialize_raw_spans,
)
from postedit.detection.engines import HttpEngine
from postedit.spans import (
    CharRange,
    ErrorCategory,
    Severity,
    TranslationPair,
    validate_annotation,
    Annotation,
)

FIXTURES = Path(__file__).parent / "fixtures"
SAMPLE_RESPONSE = (FIXTURES / "ec1_response_sample.json").read_text(encoding="utf-8")


def raw_span(**overrides) -> RawDetectedSpan:
    base = dict(
        original_text="Today",
        error_type="Spelling",
        error_severity="Minor",
        start_index_orig=0,
        end_index_orig=5,
        start_index_translation=0,
        end_index_translation=7,
        correct_text="explanation",
    )
    base.update(overrides)
    return RawDetectedSpan(**base)


class TestPrompt:
    def test_contains_all_eight_categories(self, sample_pair):
        prompt = build_ec1_prompt(sample_pair)
        for name in (
            "Addition",
            "Omission",
            "Mistranslation",
            "Untranslated",
            "Grammar",
            "Spelling",
            "Typography",
            "Unintelligible",
        ):
            assert name in prompt

    def test_contains_texts_verbatim_on_labeled_lines(self, sample_pair):
        prompt = build_ec1_prompt(sample_pair)
        assert sample_pair.source_text in prompt
        assert sample_pair.mt_text in prompt
        assert any(line.startswith("Source: ") for line in prompt.splitlines())
        assert any(line.startswith("MT: ") for line in prompt.splitlines())

    def test_demands_nonoverlap_and_zero_based_indexing(self, sample_pair):
        prompt = build_ec1_prompt(sample_pair)
        assert "non-overlapping" in prompt
        assert "0-based" in prompt

    def test_persona_and_severities(self, sample_pair):
        prompt = build_ec1_prompt(sample_pair)
        assert "professional linguist" in prompt
        assert "Minor" in prompt and "Major" in prompt

    def test_schema_field_names_present(self, sample_pair):
        prompt = build_ec1_prompt(sample_pair)
        for name in (
            "original_text",
            "error_type",
            "error_severity",
            "start_index_orig",
            "end_index_orig",
            "start_index_translation",
            "end_index_translation",
            "correct_text",
        ):
            assert name in prompt


class TestParse:
    def test_sample_body(self):
        spans = parse_ec1_response(SAMPLE_RESPONSE)
        assert len(spans) == 1
        span = spans[0]
        assert span.error_type == "Spelling"
        assert span.error_severity == "Minor"
        assert (span.start_index_orig, span.end_index_orig) == (0, 5)
        assert (span.start_index_translation, span.end_index_translation) == (0, 7)
        assert span.original_text == "Today"

    def test_empty_list(self):
        assert parse_ec1_response('{"error_spans": []}') == []

    def test_missing_field_named(self):
        doc = json.loads(SAMPLE_RESPONSE)
        del doc["error_spans"][0]["end_index_translation"]
        with pytest.raises(ResponseSchemaError) as exc:
            parse_ec1_response(json.dumps(doc))
        assert exc.value.field == "end_index_translation"

    def test_missing_top_level_key(self):
        with pytest.raises(ResponseSchemaError) as exc:
            parse_ec1_response('{"spans": []}')
        assert exc.value.field == "error_spans"

    def test_malformed_json_reports_byte_offset(self):
        with pytest.raises(ResponseParseError) as exc:
            parse_ec1_response('{"error_spans": [}')
        assert exc.value.byte_offset == 17

    def test_byte_offset_counts_utf8_bytes(self):
        body = '{"error_spans": "日本",'  # bad structure after multibyte text
        with pytest.raises(ResponseParseError) as exc:
            parse_ec1_response(body)
        assert exc.value.byte_offset == len(body.encode("utf-8"))

    def test_non_integer_index(self):
        doc = json.loads(SAMPLE_RESPONSE)
        doc["error_spans"][0]["start_index_orig"] = "0"
        with pytest.raises(ResponseSchemaError) as exc:
            parse_ec1_response(json.dumps(doc))
        assert exc.value.field == "start_index_orig"

    def test_bool_is_not_an_index(self):
        doc = json.loads(SAMPLE_RESPONSE)
        doc["error_spans"][0]["start_index_orig"] = True
        with pytest.raises(ResponseSchemaError):
            parse_ec1_response(json.dumps(doc))

    def test_extra_fields_ignored(self):
        doc = json.loads(SAMPLE_RESPONSE)
        doc["error_spans"][0]["confidence"] = 0.9
        doc["model_version"] = "x"
        assert len(parse_ec1_response(json.dumps(doc))) == 1

    def test_round_trip(self):
        spans = parse_ec1_response(SAMPLE_RESPONSE)
        assert parse_ec1_response(serialize_raw_spans(spans)) == spans


class TestSanitize:
    def test_sample_span_accepted_exactly(self, sample_pair):
        raw = parse_ec1_response(SAMPLE_RESPONSE)
        spans, report = sanitize_spans(raw, sample_pair)
        assert report.accepted == 1
        assert report.relocated == 0 and report.clamped == 0
        assert report.dropped == ()
        span = spans[0]
        assert span.category is ErrorCategory.SPELLING
        assert span.severity is Severity.MINOR
        assert span.source_range == CharRange(0, 5)
        assert span.translation_range == CharRange(0, 7)
        assert span.provenance.value == "model"
        assert span.explanation.startswith("The word 'Today'")

    def test_overlap_keeps_higher_severity(self, sample_pair):
        raws = [
            raw_span(error_severity="Major", start_index_translation=0, end_index_translation=5),
            raw_span(
                error_severity="Minor",
                original_text="Romani",
                start_index_orig=6,
                end_index_orig=12,
                start_index_translation=3,
                end_index_translation=8,
            ),
        ]
        spans, report = sanitize_spans(raws, sample_pair)
        assert report.accepted == 1
        assert spans[0].severity is Severity.MAJOR
        assert report.dropped == ((1, "overlaps a higher-priority span"),)

    def test_unknown_source_text_dropped(self, sample_pair):
        raws = [raw_span(original_text="zzz-not-there")]
        spans, report = sanitize_spans(raws, sample_pair)
        assert spans == []
        assert report.dropped == ((0, "source text mismatch"),)

    def test_relocation_by_search_on_index_mismatch(self, sample_pair):
        raws = [raw_span(original_text="Romani", start_index_orig=0, end_index_orig=6)]
        spans, report = sanitize_spans(raws, sample_pair)
        assert report.relocated == 1
        assert spans[0].source_range == CharRange(6, 12)

    def test_clamp_small_overrun(self, sample_pair):
        limit = len(sample_pair.mt_text)
        raws = [raw_span(start_index_translation=0, end_index_translation=limit + 2)]
        spans, report = sanitize_spans(raws, sample_pair)
        assert report.clamped == 1
        assert spans[0].translation_range == CharRange(0, limit)

    def test_large_overrun_dropped(self, sample_pair):
        limit = len(sample_pair.mt_text)
        raws = [raw_span(end_index_translation=limit + 3)]
        spans, report = sanitize_spans(raws, sample_pair)
        assert spans == []
        assert report.dropped == ((0, "translation range out of bounds"),)

    def test_unknown_category_and_severity_dropped(self, sample_pair):
        raws = [raw_span(error_type="Fluency"), raw_span(error_severity="Critical")]
        spans, report = sanitize_spans(raws, sample_pair)
        assert spans == []
        assert len(report.dropped) == 2
        assert "error_type" in report.dropped[0][1]
        assert "error_severity" in report.dropped[1][1]

    def test_category_parse_case_insensitive(self, sample_pair):
        raws = [raw_span(error_type="spelling", error_severity="MINOR")]
        spans, _ = sanitize_spans(raws, sample_pair)
        assert spans[0].category is ErrorCategory.SPELLING
        assert spans[0].severity is Severity.MINOR

    def test_accepted_plus_dropped_equals_input(self, sample_pair):
        raws = [
            raw_span(),
            raw_span(error_type="nope"),
            raw_span(original_text="Romani", start_index_orig=6, end_index_orig=12,
                     start_index_translation=8, end_index_translation=14),
        ]
        spans, report = sanitize_spans(raws, sample_pair)
        assert report.accepted + len(report.dropped) == len(raws)
        assert report.relocated + report.clamped <= report.accepted

    def test_deterministic(self, sample_pair):
        raws = [raw_span(), raw_span(original_text="Romani", start_index_orig=6,
                                     end_index_orig=12, start_index_translation=8,
                                     end_index_translation=14)]
        first = sanitize_spans(raws, sample_pair)
        second = sanitize_spans(raws, sample_pair)
        assert first == second


@st.composite
def fuzzed_raw_spans(draw):
    text = st.text(
        alphabet=st.sampled_from(list("abc XYZ日本語") + ["\U0001F600"]), max_size=12
    )
    return RawDetectedSpan(
        original_text=draw(text),
        error_type=draw(st.sampled_from(["Spelling", "Grammar", "Junk", "typography"])),
        error_severity=draw(st.sampled_from(["Minor", "Major", "huge", "minor"])),
        start_index_orig=draw(st.integers(-5, 80)),
        end_index_orig=draw(st.integers(-5, 80)),
        start_index_translation=draw(st.integers(-5, 80)),
        end_index_translation=draw(st.integers(-5, 80)),
        correct_text=draw(text),
    )


@given(st.lists(fuzzed_raw_spans(), max_size=10))
@settings(max_examples=200, deadline=None)
def test_sanitize_output_always_validates(raws):
    pair = TranslationPair(
        "p", "d", "en", "ja",
        "Today Romani is spoken by small groups in 42 European countries.",
        "Todayen Romani は欧州の42か国で小グループで語られています.",
    )
    spans, report = sanitize_spans(raws, pair)
    ann = Annotation(
        pair_id="p", annotator_id="x", corrected_text=pair.mt_text, spans=tuple(spans)
    )
    assert validate_annotation(ann, pair) == []
    assert report.accepted + len(report.dropped) == len(raws)
    assert report.relocated + report.clamped <= report.accepted


class TestStubEngine:
    def test_flags_copied_tokens(self, sample_pair):
        engine = StubEngine(EngineConfig(engine_id="stub"))
        spans, report = engine.detect(sample_pair)
        flagged = {s.explanation.split("'")[1] for s in spans}
        assert flagged == {"Today", "Romani"}
        for span in spans:
            assert span.category is ErrorCategory.UNTRANSLATED
            assert span.severity is Severity.MINOR

    def test_no_copied_token_of_length_4(self):
        pair = TranslationPair("p2", "d", "en", "ja", "The cat sat on a mat", "猫がマットに座った")
        engine = StubEngine(EngineConfig(engine_id="stub"))
        spans, report = engine.detect(pair)
        assert spans == []

    def test_short_tokens_ignored(self):
        pair = TranslationPair("p3", "d", "en", "ja", "one two abc", "one two abc …")
        engine = StubEngine(EngineConfig(engine_id="stub"))
        spans, _ = engine.detect(pair)
        assert spans == []

    def test_deterministic_across_calls(self, sample_pair):
        engine = StubEngine(EngineConfig(engine_id="stub"))
        results = [engine.detect(sample_pair) for _ in range(5)]
        assert all(r == results[0] for r in results)


def http_engine(handler, **config_overrides) -> HttpEngine:
    base = dict(
        engine_id="ec1",
        endpoint="https://llm.example/detect",
        model="test-model",
        max_retries=0,
        backoff_base_ms=1,
    )
    base.update(config_overrides)
    config = EngineConfig(**base)
    return HttpEngine(config, transport=httpx.MockTransport(handler), sleeper=lambda _: None)


class TestHttpEngine:
    def test_success_path(self, sample_pair):
        def handler(request):
            payload = json.loads(request.content)
            assert "prompt" in payload and payload["model"] == "test-model"
            return httpx.Response(200, text=SAMPLE_RESPONSE)

        spans, report = http_engine(handler).detect(sample_pair)
        assert report.accepted == 1
        assert spans[0].category is ErrorCategory.SPELLING

    def test_non_success_status(self, sample_pair):
        engine = http_engine(lambda request: httpx.Response(403, text="denied"))
        with pytest.raises(EngineStatusError) as exc:
            engine.detect(sample_pair)
        assert exc.value.status == 403

    def test_network_error_after_retries(self, sample_pair):
        def handler(request):
            raise httpx.ConnectError("boom")

        with pytest.raises(EngineUnavailableError):
            http_engine(handler).detect(sample_pair)

    def test_retries_transient_5xx_then_succeeds(self, sample_pair):
        calls = []

        def handler(request):
            calls.append(1)
            if len(calls) < 3:
                return httpx.Response(503, text="busy")
            return httpx.Response(200, text=SAMPLE_RESPONSE)

        engine = http_engine(handler, max_retries=2)
        spans, _ = engine.detect(sample_pair)
        assert len(calls) == 3
        assert len(spans) == 1

    def test_bad_body_preserves_raw(self, sample_pair):
        engine = http_engine(lambda request: httpx.Response(200, text="not json at all"))
        with pytest.raises(DetectionFormatError) as exc:
            engine.detect(sample_pair)
        assert exc.value.raw_body == "not json at all"

    def test_credential_from_environment(self, sample_pair, monkeypatch):
        monkeypatch.setenv("TEST_LLM_KEY", "s3cret")
        seen = {}

        def handler(request):
            seen["auth"] = request.headers.get("Authorization")
            return httpx.Response(200, text='{"error_spans": []}')

        engine = http_engine(handler, credential_env="TEST_LLM_KEY")
        engine.detect(sample_pair)
        assert seen["auth"] == "Bearer s3cret"

    def test_xcomet_payload_shape(self, sample_pair):
        def handler(request):
            payload = json.loads(request.content)
            assert payload["source"] == sample_pair.source_text
            assert payload["translation"] == sample_pair.mt_text
            return httpx.Response(200, text='{"error_spans": []}')

        config = EngineConfig(
            engine_id="xcomet", kind="xcomet", endpoint="http://localhost:9111/spans",
            max_retries=0,
        )
        engine = HttpEngine(config, transport=httpx.MockTransport(handler))
        spans, report = engine.detect(sample_pair)
        assert spans == [] and report.accepted == 0


class TestRegistry:
    def test_detect_routes_to_engine(self, sample_pair):
        registry = EngineRegistry.from_configs([EngineConfig(engine_id="stub")])
        spans, _ = detect(registry, DetectionRequest(pair=sample_pair, engine_id="stub"))
        assert spans

    def test_unknown_engine_lists_known(self, sample_pair):
        registry = EngineRegistry.from_configs([EngineConfig(engine_id="stub")])
        with pytest.raises(UnknownEngineError) as exc:
            detect(registry, DetectionRequest(pair=sample_pair, engine_id="gpt"))
        assert exc.value.known == ["stub"]

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EngineConfig(engine_id="ec1", endpoint="")  # non-stub needs endpoint
        with pytest.raises(ValueError):
            EngineConfig(engine_id="stub", timeout_s=0)
        with pytest.raises(ValueError):
            EngineConfig(engine_id="stub", max_retries=-1)
