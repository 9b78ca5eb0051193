"""Thin HTTP client used by the CLI.

By default requests are routed in-process through the ASGI app, so the CLI
works with no server running; set INLINESCOPE_SERVER (or pass --server) to
talk to a remote inlinescope service instead. Either way the CLI speaks the
same wire protocol.
"""

from __future__ import annotations

import os

import httpx

SERVER_ENV = "INLINESCOPE_SERVER"


class ServiceError(Exception):
    """A structured error returned by the service."""

    def __init__(self, kind: str, detail: str, status_code: int, payload: dict | None = None):
        self.kind = kind
        self.detail = detail
        self.status_code = status_code
        self.payload = payload or {}
        super().__init__(f"{kind}: {detail}")


class ServiceClient:
    def __init__(self, server: str | None = None, timeout: float | None = None):
        self.server = server or os.environ.get(SERVER_ENV) or None
        self._timeout = timeout

    async def __aenter__(self) -> "ServiceClient":
        if self.server:
            self._client = httpx.AsyncClient(
                base_url=self.server.rstrip("/"), timeout=self._timeout
            )
        else:
            from .service import create_app

            self._client = httpx.AsyncClient(
                transport=httpx.ASGITransport(app=create_app()),
                base_url="http://inlinescope.local",
                timeout=self._timeout,
            )
        return self

    async def __aexit__(self, *exc_info) -> None:
        await self._client.aclose()

    async def get(self, path: str) -> dict:
        return self._handle(await self._client.get(path))

    async def post(self, path: str, payload: dict) -> dict:
        return self._handle(await self._client.post(path, json=payload))

    def _handle(self, response: httpx.Response) -> dict:
        try:
            body = response.json()
        except ValueError:
            body = {}
        if response.status_code >= 400:
            error = body.get("error") if isinstance(body, dict) else None
            if isinstance(error, dict):
                raise ServiceError(
                    error.get("kind", "HTTPError"),
                    error.get("detail", response.text),
                    response.status_code,
                    payload=body,
                )
            raise ServiceError("HTTPError", response.text[:500], response.status_code)
        return body
