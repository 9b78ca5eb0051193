"""FastAPI service exposing the inlinescope toolkit."""

from .app import create_app

__all__ = ["create_app"]
