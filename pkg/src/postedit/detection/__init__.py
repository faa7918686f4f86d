"""Automatic error detection: prompt building, wire parsing, sanitization, engines."""

from .engines import (
    DetectionError,
    DetectionFormatError,
    DetectionRequest,
    EngineConfig,
    EngineRegistry,
    EngineStatusError,
    EngineUnavailableError,
    HttpEngine,
    StubEngine,
    UnknownEngineError,
    build_engine,
    detect,
)
from .prompt import build_ec1_prompt
from .sanitize import SanitizationReport, sanitize_spans
from .wire import (
    RAW_SPAN_FIELDS,
    RawDetectedSpan,
    ResponseParseError,
    ResponseSchemaError,
    WireError,
    parse_ec1_response,
    serialize_raw_spans,
)

__all__ = [
    "DetectionError",
    "DetectionFormatError",
    "DetectionRequest",
    "EngineConfig",
    "EngineRegistry",
    "EngineStatusError",
    "EngineUnavailableError",
    "HttpEngine",
    "StubEngine",
    "UnknownEngineError",
    "build_engine",
    "detect",
    "build_ec1_prompt",
    "SanitizationReport",
    "sanitize_spans",
    "RAW_SPAN_FIELDS",
    "RawDetectedSpan",
    "ResponseParseError",
    "ResponseSchemaError",
    "WireError",
    "parse_ec1_response",
    "serialize_raw_spans",
]
