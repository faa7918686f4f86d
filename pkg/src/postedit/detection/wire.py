"""Wire schema for detection engines: {"error_spans": [...]} with fixed field names."""

from __future__ import annotations

import json
from dataclasses import dataclass

RAW_SPAN_FIELDS = (
    "original_text",
    "error_type",
    "error_severity",
    "start_index_orig",
    "end_index_orig",
    "start_index_translation",
    "end_index_translation",
    "correct_text",
)

_STRING_FIELDS = ("original_text", "error_type", "error_severity", "correct_text")
_INT_FIELDS = (
    "start_index_orig",
    "end_index_orig",
    "start_index_translation",
    "end_index_translation",
)


@dataclass(frozen=True)
class RawDetectedSpan:
    """One span exactly as an engine emitted it, before any sanitization."""

    original_text: str
    error_type: str
    error_severity: str
    start_index_orig: int
    end_index_orig: int
    start_index_translation: int
    end_index_translation: int
    correct_text: str


class WireError(Exception):
    """Engine response does not speak the expected wire schema."""


class ResponseParseError(WireError):
    def __init__(self, message: str, byte_offset: int):
        self.byte_offset = byte_offset
        super().__init__(f"malformed JSON at byte {byte_offset}: {message}")


class ResponseSchemaError(WireError):
    def __init__(self, field: str, detail: str):
        self.field = field
        super().__init__(f"bad field {field!r}: {detail}")


def parse_ec1_response(body: str) -> list[RawDetectedSpan]:
    """Parse an engine response body into raw spans.

    Unknown extra fields are ignored; missing or mistyped required fields
    fail with the field named.
    """
    try:
        doc = json.loads(body)
    except json.JSONDecodeError as exc:
        byte_offset = len(body[: exc.pos].encode("utf-8"))
        raise ResponseParseError(exc.msg, byte_offset) from exc

    if not isinstance(doc, dict):
        raise ResponseSchemaError("error_spans", "response is not a JSON object")
    if "error_spans" not in doc:
        raise ResponseSchemaError("error_spans", "missing required key")
    items = doc["error_spans"]
    if not isinstance(items, list):
        raise ResponseSchemaError("error_spans", "must be an array")

    spans: list[RawDetectedSpan] = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise ResponseSchemaError("error_spans", f"element {i} is not an object")
        values: dict[str, object] = {}
        for name in RAW_SPAN_FIELDS:
            if name not in item:
                raise ResponseSchemaError(name, f"missing from span {i}")
            values[name] = item[name]
        for name in _STRING_FIELDS:
            if not isinstance(values[name], str):
                raise ResponseSchemaError(name, f"span {i}: expected a string")
        for name in _INT_FIELDS:
            # bool is an int subclass; it is not a valid index.
            if not isinstance(values[name], int) or isinstance(values[name], bool):
                raise ResponseSchemaError(name, f"span {i}: expected an integer")
        spans.append(RawDetectedSpan(**values))  # type: ignore[arg-type]
    return spans


def serialize_raw_spans(spans: list[RawDetectedSpan]) -> str:
    """Inverse of parse_ec1_response for valid span lists."""
    doc = {
        "error_spans": [
            {name: getattr(span, name) for name in RAW_SPAN_FIELDS} for span in spans
        ]
    }
    return json.dumps(doc, ensure_ascii=False)
