"""Deterministic stand-in models.

Echo mode exists so the engine's integration suite can exercise the wire
protocol without downloading checkpoints: every output is a pure function
of the request. Vectors come from hashed tokens, tags from unigram
overlap, probabilities from token containment.
"""

from __future__ import annotations

import hashlib
import math
import re

_TOKEN_RE = re.compile(r"[0-9A-Za-z_']+|[一-鿿]")
_SENT_RE = re.compile(r"[^.!?。！？\n]+[.!?。！？]*")


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _token_vector(token: str, dim: int) -> list[float]:
    values: list[float] = []
    counter = 0
    seed = token.encode("utf-8")
    while len(values) < dim:
        digest = hashlib.sha256(seed + counter.to_bytes(4, "big")).digest()
        for i in range(0, len(digest) - 1, 2):
            if len(values) >= dim:
                break
            raw = int.from_bytes(digest[i : i + 2], "big")
            values.append((raw / 65535.0) * 2.0 - 1.0)
        counter += 1
    norm = math.sqrt(sum(v * v for v in values)) or 1.0
    return [v / norm for v in values]


class EchoEmbedder:
    def __init__(self, dim: int, max_tokens: int = 512):
        self.dim = dim
        self.max_tokens = max_tokens
        self._cache: dict[str, list[float]] = {}

    def embed(self, texts: list[str]) -> list[list[float]]:
        return [self._one(t) for t in texts]

    def _one(self, text: str) -> list[float]:
        tokens = _tokens(text)[: self.max_tokens]
        if not tokens:
            return [0.0] * self.dim
        acc = [0.0] * self.dim
        for tok in tokens:
            vec = self._cache.get(tok)
            if vec is None:
                vec = self._cache[tok] = _token_vector(tok, self.dim)
            for i, v in enumerate(vec):
                acc[i] += v
        n = len(tokens)
        acc = [v / n for v in acc]
        norm = math.sqrt(sum(v * v for v in acc)) or 1.0
        return [v / norm for v in acc]


class EchoTagger:
    """Tags the passage sentence with the highest claim overlap as a span."""

    def tag(self, claim: str, passage: str) -> dict:
        tokens: list[str] = []
        offsets: list[list[int]] = []
        for m in re.finditer(r"\S+", passage):
            tokens.append(m.group())
            offsets.append([m.start(), m.end()])
        tags = ["O"] * len(tokens)

        claim_tokens = set(_tokens(claim))
        best_span, best_overlap = None, 0
        for sent in _SENT_RE.finditer(passage):
            overlap = len(claim_tokens & set(_tokens(sent.group())))
            if overlap > best_overlap:
                best_overlap = overlap
                best_span = (sent.start(), sent.end())
        if best_span is not None:
            first = True
            for i, (start, end) in enumerate(offsets):
                if start >= best_span[0] and end <= best_span[1]:
                    tags[i] = "B" if first else "I"
                    first = False
        return {"tokens": tokens, "tags": tags, "offsets": offsets}


class EchoClassifier:
    def classify(self, claim: str, evidence: list[str]) -> float:
        claim_tokens = set(_tokens(claim))
        if not claim_tokens or not evidence:
            return 0.0
        evidence_tokens: set[str] = set()
        for e in evidence:
            evidence_tokens |= set(_tokens(e))
        return len(claim_tokens & evidence_tokens) / len(claim_tokens)


class EchoReformulator:
    def reformulate(self, query: str, snippet: str) -> str:
        return f"{query} [SEP] {snippet}".strip()
