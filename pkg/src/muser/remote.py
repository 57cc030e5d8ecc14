"""HTTP clients for the optional model-server endpoints.

All remote calls share one wire discipline: JSON in, JSON out, a bounded
number of in-flight requests, and a BackendError that wraps the cause so
callers can decide between failing and falling back.
"""

from __future__ import annotations

import threading

import requests

DEFAULT_TIMEOUT = 30.0

_inflight = threading.BoundedSemaphore(4)
_local = threading.local()


class BackendError(RuntimeError):
    """A remote backend call failed (transport, status, or malformed body)."""


def set_max_inflight(limit: int) -> None:
    """Cap concurrent remote requests; extra callers block until a slot frees."""
    global _inflight
    if limit < 1:
        raise ValueError("limit must be >= 1")
    _inflight = threading.BoundedSemaphore(limit)


def _session() -> requests.Session:
    if not hasattr(_local, "session"):
        _local.session = requests.Session()
    return _local.session


def post_json(url: str, payload: dict, timeout: float = DEFAULT_TIMEOUT) -> dict:
    with _inflight:
        try:
            resp = _session().post(url, json=payload, timeout=timeout)
        except requests.RequestException as exc:
            raise BackendError(f"POST {url} failed: {exc}") from exc
    if resp.status_code != 200:
        raise BackendError(f"POST {url} returned {resp.status_code}: {resp.text[:200]}")
    try:
        body = resp.json()
    except ValueError as exc:
        raise BackendError(f"POST {url} returned non-JSON body") from exc
    if not isinstance(body, dict):
        raise BackendError(f"POST {url} returned non-object JSON")
    return body


def embed_remote(endpoint: str, texts: list[str]) -> tuple[list[list[float]], int]:
    body = post_json(endpoint, {"texts": texts})
    try:
        vectors = body["vectors"]
        dim = int(body["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BackendError(f"malformed embed response: {exc}") from exc
    if len(vectors) != len(texts):
        raise BackendError(f"embed returned {len(vectors)} vectors for {len(texts)} texts")
    return vectors, dim


def tag_remote(endpoint: str, claim: str, passage: str) -> dict:
    body = post_json(endpoint, {"claim": claim, "passage": passage})
    tokens = body.get("tokens")
    tags = body.get("tags")
    if not isinstance(tokens, list) or not isinstance(tags, list) or len(tokens) != len(tags):
        raise BackendError("malformed tag response: tokens/tags missing or unequal length")
    return body


def classify_remote(endpoint: str, claim: str, evidence: list[str]) -> float:
    body = post_json(endpoint, {"claim": claim, "evidence": evidence})
    try:
        prob = float(body["prob_true"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BackendError(f"malformed classify response: {exc}") from exc
    if not 0.0 <= prob <= 1.0:
        raise BackendError(f"classify prob_true out of range: {prob}")
    return prob


def reformulate_remote(endpoint: str, query: str, snippet: str) -> str:
    body = post_json(endpoint, {"query": query, "snippet": snippet})
    text = body.get("text")
    if not isinstance(text, str) or not text.strip():
        raise BackendError("malformed reformulate response: empty text")
    return text
