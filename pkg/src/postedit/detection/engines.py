"""Detection engines behind one interface: a stub, an LLM endpoint, a sidecar."""

from __future__ import annotations

import os
import re
import threading
import time
from dataclasses import dataclass, field

import httpx

from ..spans import ErrorSpan, TranslationPair
from .prompt import build_ec1_prompt
from .sanitize import SanitizationReport, sanitize_spans
from .wire import RawDetectedSpan, WireError, parse_ec1_response

STUB_MIN_TOKEN_LENGTH = 4

_TOKEN_RE = re.compile(r"\S+")


class DetectionError(Exception):
    """Base class for engine failures."""


class UnknownEngineError(DetectionError):
    def __init__(self, engine_id: str, known: list[str]):
        self.engine_id = engine_id
        self.known = known
        super().__init__(
            f"no engine {engine_id!r}; configured engines: {', '.join(known) or '(none)'}"
        )


class EngineUnavailableError(DetectionError):
    def __init__(self, engine_id: str, detail: str):
        self.engine_id = engine_id
        super().__init__(f"engine {engine_id!r} unreachable: {detail}")


class EngineStatusError(DetectionError):
    def __init__(self, engine_id: str, status: int, body: str):
        self.engine_id = engine_id
        self.status = status
        self.body = body
        super().__init__(f"engine {engine_id!r} returned HTTP {status}")


class DetectionFormatError(DetectionError):
    def __init__(self, engine_id: str, detail: str, raw_body: str):
        self.engine_id = engine_id
        self.raw_body = raw_body  # preserved for debugging
        super().__init__(f"engine {engine_id!r} response unusable: {detail}")


@dataclass(frozen=True)
class EngineConfig:
    engine_id: str
    kind: str = ""  # stub | ec1 | xcomet; inferred from engine_id when empty
    endpoint: str = ""
    model: str = ""
    credential_env: str = ""  # name of the env var holding the secret
    timeout_s: float = 30.0
    max_retries: int = 2
    backoff_base_ms: int = 250
    max_in_flight: int | None = None

    def __post_init__(self) -> None:
        if not self.engine_id:
            raise ValueError("engine_id must be non-empty")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if not self.kind:
            inferred = "stub" if self.engine_id == "stub" else "ec1"
            object.__setattr__(self, "kind", inferred)
        if self.kind not in ("stub", "ec1", "xcomet"):
            raise ValueError(f"unknown engine kind {self.kind!r}")
        if self.kind != "stub" and not self.endpoint:
            raise ValueError(f"engine {self.engine_id!r} needs an endpoint")

    @classmethod
    def from_dict(cls, doc: dict) -> "EngineConfig":
        return cls(
            engine_id=doc["engine_id"],
            kind=doc.get("kind", ""),
            endpoint=doc.get("endpoint", ""),
            model=doc.get("model", ""),
            credential_env=doc.get("credential_env", ""),
            timeout_s=float(doc.get("timeout_s", 30.0)),
            max_retries=int(doc.get("max_retries", 2)),
            backoff_base_ms=int(doc.get("backoff_base_ms", 250)),
            max_in_flight=doc.get("max_in_flight"),
        )


@dataclass(frozen=True)
class DetectionRequest:
    pair: TranslationPair
    engine_id: str


class _Metrics:
    """Tiny thread-safe call counter."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.calls = 0
        self.failures = 0

    def record(self, ok: bool) -> None:
        with self._lock:
            self.calls += 1
            if not ok:
                self.failures += 1


class StubEngine:
    """Offline deterministic engine for tests and demos.

    Flags every maximal whitespace-delimited source token of at least four
    code points that also appears verbatim in the MT output, as an
    Untranslated/Minor span over the first occurrence on each side.
    """

    def __init__(self, config: EngineConfig):
        self.config = config
        self.metrics = _Metrics()

    @property
    def engine_id(self) -> str:
        return self.config.engine_id

    def detect(self, pair: TranslationPair) -> tuple[list[ErrorSpan], SanitizationReport]:
        raw: list[RawDetectedSpan] = []
        seen: set[str] = set()
        for match in _TOKEN_RE.finditer(pair.source_text):
            token = match.group()
            if len(token) < STUB_MIN_TOKEN_LENGTH or token in seen:
                continue
            seen.add(token)
            mt_at = pair.mt_text.find(token)
            if mt_at == -1:
                continue
            src_at = pair.source_text.find(token)
            raw.append(
                RawDetectedSpan(
                    original_text=token,
                    error_type="Untranslated",
                    error_severity="Minor",
                    start_index_orig=src_at,
                    end_index_orig=src_at + len(token),
                    start_index_translation=mt_at,
                    end_index_translation=mt_at + len(token),
                    correct_text=f"Source token {token!r} appears untranslated in the MT output.",
                )
            )
        self.metrics.record(ok=True)
        return sanitize_spans(raw, pair)


class HttpEngine:
    """Engine backed by an HTTP endpoint speaking the error_spans wire schema.

    kind "ec1" posts a full detection prompt to an LLM endpoint; kind
    "xcomet" posts the bare pair to a local model sidecar. Both get the same
    retry, timeout, and sanitization treatment. The credential is read from
    the configured environment variable at call time and never logged.
    """

    def __init__(
        self,
        config: EngineConfig,
        transport: httpx.BaseTransport | None = None,
        sleeper=time.sleep,
    ):
        self.config = config
        self.metrics = _Metrics()
        self._sleep = sleeper
        self._client = httpx.Client(transport=transport, timeout=config.timeout_s)
        self._gate = (
            threading.BoundedSemaphore(config.max_in_flight)
            if config.max_in_flight
            else None
        )

    @property
    def engine_id(self) -> str:
        return self.config.engine_id

    def _payload(self, pair: TranslationPair) -> dict:
        if self.config.kind == "xcomet":
            return {
                "source": pair.source_text,
                "translation": pair.mt_text,
                "source_lang": pair.source_lang,
                "target_lang": pair.target_lang,
            }
        return {"model": self.config.model, "prompt": build_ec1_prompt(pair)}

    def _headers(self) -> dict[str, str]:
        headers = {}
        if self.config.credential_env:
            secret = os.environ.get(self.config.credential_env, "")
            if secret:
                headers["Authorization"] = f"Bearer {secret}"
        return headers

    def detect(self, pair: TranslationPair) -> tuple[list[ErrorSpan], SanitizationReport]:
        if self._gate is not None:
            with self._gate:
                return self._detect(pair)
        return self._detect(pair)

    def _detect(self, pair: TranslationPair) -> tuple[list[ErrorSpan], SanitizationReport]:
        payload = self._payload(pair)
        headers = self._headers()
        attempts = self.config.max_retries + 1
        last_error = ""
        response = None
        for attempt in range(attempts):
            if attempt:
                self._sleep(self.config.backoff_base_ms * (2 ** (attempt - 1)) / 1000.0)
            try:
                response = self._client.post(
                    self.config.endpoint, json=payload, headers=headers
                )
            except httpx.TransportError as exc:
                last_error = str(exc) or type(exc).__name__
                response = None
                continue
            if response.status_code >= 500 and attempt < attempts - 1:
                continue  # transient upstream failure, retry
            break

        if response is None:
            self.metrics.record(ok=False)
            raise EngineUnavailableError(self.engine_id, last_error)
        if not response.is_success:
            self.metrics.record(ok=False)
            raise EngineStatusError(self.engine_id, response.status_code, response.text)

        body = response.text
        try:
            raw = parse_ec1_response(body)
        except WireError as exc:
            self.metrics.record(ok=False)
            raise DetectionFormatError(self.engine_id, str(exc), raw_body=body) from exc
        self.metrics.record(ok=True)
        return sanitize_spans(raw, pair)


def build_engine(config: EngineConfig, transport: httpx.BaseTransport | None = None):
    if config.kind == "stub":
        return StubEngine(config)
    return HttpEngine(config, transport=transport)


class EngineRegistry:
    """Immutable id -> engine lookup; engines are safe for concurrent use."""

    def __init__(self, engines: list):
        self._engines = {engine.engine_id: engine for engine in engines}

    @classmethod
    def from_configs(
        cls,
        configs: list[EngineConfig],
        transport: httpx.BaseTransport | None = None,
    ) -> "EngineRegistry":
        return cls([build_engine(cfg, transport=transport) for cfg in configs])

    def ids(self) -> list[str]:
        return sorted(self._engines)

    def get(self, engine_id: str):
        try:
            return self._engines[engine_id]
        except KeyError:
            raise UnknownEngineError(engine_id, self.ids()) from None


def detect(
    registry: EngineRegistry, request: DetectionRequest
) -> tuple[list[ErrorSpan], SanitizationReport]:
    """Run the requested engine over the pair, sanitized and validated."""
    engine = registry.get(request.engine_id)
    return engine.detect(request.pair)
