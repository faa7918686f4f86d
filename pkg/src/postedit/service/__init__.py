"""HTTP service: FastAPI app, config, and API schemas."""

from .app import create_app
from .config import ServiceConfig, load_config, resolve_token

__all__ = ["create_app", "ServiceConfig", "load_config", "resolve_token"]
