"""Text-to-vector mapping and the dot-product relevance score.

Two backends share one descriptor type: ``hashed`` derives a pseudo-random
unit vector per token from a seeded hash (fully offline and deterministic,
the test substrate), ``remote`` POSTs to an embedding service. A text's
vector is the mean of its token vectors, L2-normalized by default so
relevance scores are bounded in [-1, 1] and a fixed evidence threshold is
meaningful.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import remote
from .text import tokenize

DEFAULT_DIM = 256

_U64 = np.uint64
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_GAMMA = _U64(0x9E3779B97F4A7C15)


@dataclass(frozen=True)
class BackendDescriptor:
    kind: str = "hashed"
    dim: int = DEFAULT_DIM
    endpoint: str | None = None
    normalize: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("hashed", "remote"):
            raise ValueError(f"unknown backend kind: {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote backend requires an endpoint")


def unit_normalize(v: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return v
    return (v / np.float32(norm)).astype(np.float32)


def _splitmix64(seed: int, n: int) -> np.ndarray:
    """First n outputs of a SplitMix-style stream, computed in parallel."""
    z = _U64(seed & 0xFFFFFFFFFFFFFFFF) + _GAMMA * np.arange(1, n + 1, dtype=np.uint64)
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def _token_seed(token: str, seed: int) -> int:
    digest = hashlib.blake2b(
        token.encode("utf-8"), digest_size=8, salt=seed.to_bytes(8, "little", signed=True)
    ).digest()
    return int.from_bytes(digest, "little")


def _gaussian_from_seed(seed: int, dim: int) -> np.ndarray:
    """Box-Muller over hash-derived uniforms; deterministic in (seed, dim)."""
    n_pairs = (dim + 1) // 2
    bits = _splitmix64(seed, 2 * n_pairs)
    u = (np.right_shift(bits, _U64(11)).astype(np.float64) + 0.5) * 2.0**-53
    u1, u2 = u[:n_pairs], u[n_pairs:]
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    g = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:dim]
    return g.astype(np.float32)


# Per-(seed, dim) token vector cache; cleared wholesale when oversized.
_token_cache: dict[tuple[int, int], dict[str, np.ndarray]] = {}
_TOKEN_CACHE_LIMIT = 1 << 17


def _token_vector(token: str, seed: int, dim: int) -> np.ndarray:
    cache = _token_cache.setdefault((seed, dim), {})
    vec = cache.get(token)
    if vec is None:
        if len(cache) >= _TOKEN_CACHE_LIMIT:
            cache.clear()
        vec = unit_normalize(_gaussian_from_seed(_token_seed(token, seed), dim))
        cache[token] = vec
    return vec


def _embed_hashed(text: str, backend: BackendDescriptor) -> np.ndarray:
    tokens = tokenize(text)
    if not tokens:
        return np.zeros(backend.dim, dtype=np.float32)
    acc = np.zeros(backend.dim, dtype=np.float32)
    for tok in tokens:
        acc += _token_vector(tok, backend.seed, backend.dim)
    vec = acc / np.float32(len(tokens))
    return unit_normalize(vec) if backend.normalize else vec


def embed(text: str, backend: BackendDescriptor) -> np.ndarray:
    """Map text to a float32 vector; empty text maps to the zero vector."""
    return embed_batch([text], backend)[0]


def embed_batch(texts: list[str], backend: BackendDescriptor) -> np.ndarray:
    if backend.kind == "hashed":
        out = np.empty((len(texts), backend.dim), dtype=np.float32)
        for i, t in enumerate(texts):
            out[i] = _embed_hashed(t, backend)
        return out
    vectors, dim = remote.embed_remote(backend.endpoint, texts)
    if dim != backend.dim:
        raise remote.BackendError(f"remote dim {dim} != configured dim {backend.dim}")
    arr = np.asarray(vectors, dtype=np.float32)
    if arr.shape != (len(texts), dim):
        raise remote.BackendError(f"remote vectors have shape {arr.shape}")
    if backend.normalize:
        arr = np.stack([unit_normalize(v) for v in arr])
    return arr


def relevance(c: np.ndarray, p: np.ndarray) -> float:
    """Dot-product relevance; in [-1, 1] when both vectors are unit length."""
    if c.shape != p.shape:
        raise ValueError(f"dim mismatch: {c.shape} vs {p.shape}")
    return float(np.dot(c.astype(np.float64), p.astype(np.float64)))
