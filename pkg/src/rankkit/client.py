"""Thin client for the verification service.

By default the CLI drives the ASGI app in-process, which keeps batch runs
deterministic and server-free; pass a server URL to talk to a running
instance instead.
"""

from __future__ import annotations

import asyncio

import httpx


def call(path: str, payload: dict, server: str | None = None, timeout: float = 600.0) -> dict:
    """POST a command and return the response body ({status, report})."""
    if server is not None:
        with httpx.Client(base_url=server, timeout=timeout) as client:
            resp = client.post(path, json=payload)
    else:
        resp = asyncio.run(_asgi_post(path, payload, timeout))
    if resp.status_code != 200:
        detail = resp.json().get("detail", resp.text) if resp.content else resp.text
        return {"status": 3, "report": {"error": {"kind": "BadRequest", "message": str(detail)}}}
    return resp.json()


async def _asgi_post(path: str, payload: dict, timeout: float) -> httpx.Response:
    from .service.app import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport, base_url="http://rankkit.internal", timeout=timeout
    ) as client:
        return await client.post(path, json=payload)
