"""Key-evidence extraction from retrieved paragraphs.

Two selection methods: score every sentence against the claim and keep the
ones above a relevance threshold, or ask a remote BIO tagger for evidence
spans. Tagger spans are re-scored with the same embedding relevance so one
threshold governs both methods downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Paragraph
from .embedding import BackendDescriptor, embed, embed_batch, relevance
from .index import ScoredParagraph
from .remote import BackendError, tag_remote
from .summarize import Claim
from .text import split_sentences

# Bounds the per-step trace size; selection beyond the top 20 candidates
# never affects the stop rule or the winner.
MAX_SNIPPETS_PER_STEP = 20

BIO_TAGS = frozenset({"O", "B", "I"})


@dataclass(frozen=True)
class EvidenceSnippet:
    text: str
    source: tuple[str, int, int]  # (doc_id, para_id, sentence_index)
    score: float
    step_found: int = 1


@dataclass(frozen=True)
class BioTagSequence:
    tokens: tuple[str, ...]
    tags: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.tags):
            raise ValueError("tokens and tags must have equal length")


def decode_bio(seq: BioTagSequence) -> list[tuple[int, int]]:
    """Maximal B(I)* runs as [start, end) spans; an orphan I opens a span."""
    unknown = set(seq.tags) - BIO_TAGS
    if unknown:
        raise ValueError(f"unknown BIO tags: {sorted(unknown)}")
    spans = []
    start = None
    for i, tag in enumerate(seq.tags):
        if tag == "B" or (tag == "I" and start is None):
            if start is not None:
                spans.append((start, i))
            start = i
        elif tag == "O":
            if start is not None:
                spans.append((start, i))
                start = None
    if start is not None:
        spans.append((start, len(seq.tags)))
    return spans


def score_sentences(
    claim_vec: np.ndarray,
    paragraphs: list[ScoredParagraph],
    backend: BackendDescriptor,
    step_found: int = 1,
    limit: int = MAX_SNIPPETS_PER_STEP,
) -> list[EvidenceSnippet]:
    """Every sentence of every paragraph scored against the claim vector.

    Result is score-descending with ties kept in source order, truncated
    to ``limit`` candidates.
    """
    texts: list[str] = []
    sources: list[tuple[str, int, int]] = []
    for sp in paragraphs:
        p = sp.paragraph
        for si, sent in enumerate(split_sentences(p.text)):
            texts.append(sent)
            sources.append((p.doc_id, p.para_id, si))
    if not texts:
        return []
    vectors = embed_batch(texts, backend)
    snippets = [
        EvidenceSnippet(text=t, source=src, score=relevance(claim_vec, v), step_found=step_found)
        for t, src, v in zip(texts, sources, vectors)
    ]
    snippets.sort(key=lambda s: -s.score)
    return snippets[:limit]


def select_by_threshold(
    claim: Claim,
    paragraphs: list[ScoredParagraph],
    lam: float,
    backend: BackendDescriptor,
    step_found: int = 1,
) -> list[EvidenceSnippet]:
    """Sentences whose relevance to the claim strictly exceeds ``lam``.

    An empty result signals insufficient evidence at this threshold.
    """
    claim_vec = embed(claim.text, backend)
    candidates = score_sentences(claim_vec, paragraphs, backend, step_found=step_found)
    return [s for s in candidates if s.score > lam]


def _sentence_index_at(paragraph_text: str, char_pos: int) -> int:
    offset = 0
    for i, sent in enumerate(split_sentences(paragraph_text)):
        start = paragraph_text.find(sent, offset)
        if start < 0:
            continue
        end = start + len(sent)
        if char_pos < end:
            return i
        offset = end
    return max(0, len(split_sentences(paragraph_text)) - 1)


def tagger_spans(
    claim: Claim,
    paragraph: Paragraph,
    tagger_endpoint: str,
    backend: BackendDescriptor,
    step_found: int = 1,
) -> list[EvidenceSnippet]:
    """Evidence spans from the remote BIO tagger, re-scored by relevance.

    Raises BackendError when the tagger is unreachable or malformed.
    """
    body = tag_remote(tagger_endpoint, claim.text, paragraph.text)
    seq = BioTagSequence(tokens=tuple(body["tokens"]), tags=tuple(body["tags"]))
    offsets = body.get("offsets")
    spans = decode_bio(seq)
    if not spans:
        return []
    claim_vec = embed(claim.text, backend)
    snippets = []
    for start, end in spans:
        if offsets:
            lo, hi = offsets[start][0], offsets[end - 1][1]
            span_text = paragraph.text[lo:hi]
            char_pos = lo
        else:
            span_text = " ".join(seq.tokens[start:end])
            char_pos = max(0, paragraph.text.find(seq.tokens[start]))
        if not span_text.strip():
            continue
        sent_idx = _sentence_index_at(paragraph.text, char_pos)
        score = relevance(claim_vec, embed(span_text, backend))
        snippets.append(
            EvidenceSnippet(
                text=span_text,
                source=(paragraph.doc_id, paragraph.para_id, sent_idx),
                score=score,
                step_found=step_found,
            )
        )
    snippets.sort(key=lambda s: -s.score)
    return snippets[:MAX_SNIPPETS_PER_STEP]


def select_by_tagger(
    claim: Claim,
    paragraph: Paragraph,
    tagger_endpoint: str,
    backend: BackendDescriptor,
    lam: float,
    flags: list[str] | None = None,
    step_found: int = 1,
) -> list[EvidenceSnippet]:
    """Tagger-based selection with a threshold-method fallback.

    When the tagger is unavailable the paragraph is scored by the
    threshold method instead and a flag is recorded.
    """
    try:
        return tagger_spans(claim, paragraph, tagger_endpoint, backend, step_found=step_found)
    except BackendError as exc:
        if flags is not None:
            flags.append(f"tagger_fallback: {exc}")
        scored = [ScoredParagraph(paragraph=paragraph, score=0.0)]
        return select_by_threshold(claim, scored, lam, backend, step_found=step_found)
