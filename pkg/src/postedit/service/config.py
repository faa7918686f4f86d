"""Service configuration: one JSON document plus CLI overrides.

Schema (all keys optional):
  {
    "bind": "127.0.0.1:8080",
    "store": {"backend": "memory" | "file", "path": "state.json"},
    "engines": [
      {"engine_id": "stub"},
      {"engine_id": "ec1", "endpoint": "https://...", "model": "...",
       "credential_env": "EC1_API_KEY", "timeout_s": 30,
       "max_retries": 2, "backoff_base_ms": 250, "max_in_flight": 4},
      {"engine_id": "xcomet", "kind": "xcomet", "endpoint": "http://localhost:9111/spans"}
    ],
    "auth_tokens": {"annotator-id": "literal-token" | "env:VAR_NAME"}
  }

Engine credentials and auth token values referenced as env:NAME are read
from the environment at use time and never written anywhere.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from ..detection import EngineConfig


@dataclass(frozen=True)
class ServiceConfig:
    bind: str = "127.0.0.1:8080"
    store_backend: str = "memory"
    store_path: str | None = None
    engines: tuple[EngineConfig, ...] = (EngineConfig(engine_id="stub"),)
    auth_tokens: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.store_backend not in ("memory", "file"):
            raise ValueError(f"unknown store backend {self.store_backend!r}")
        if self.store_backend == "file" and not self.store_path:
            raise ValueError("file store backend requires store_path")
        if not self.engines:
            raise ValueError("configure at least one engine")


def resolve_token(reference: str) -> str:
    """A token reference is either a literal or env:VAR_NAME."""
    if reference.startswith("env:"):
        return os.environ.get(reference[4:], "")
    return reference


def load_config(
    path: str | None = None,
    *,
    bind: str | None = None,
    store_backend: str | None = None,
    store_path: str | None = None,
) -> ServiceConfig:
    """Read the config file (if any) and apply CLI flag overrides."""
    doc: dict = {}
    if path:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)

    store_doc = doc.get("store", {})
    engines_doc = doc.get("engines")
    engines = (
        tuple(EngineConfig.from_dict(e) for e in engines_doc)
        if engines_doc
        else (EngineConfig(engine_id="stub"),)
    )
    return ServiceConfig(
        bind=bind or doc.get("bind", "127.0.0.1:8080"),
        store_backend=store_backend or store_doc.get("backend", "memory"),
        store_path=store_path or store_doc.get("path"),
        engines=engines,
        auth_tokens=dict(doc.get("auth_tokens", {})),
    )
