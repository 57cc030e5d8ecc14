"""Key-claim extraction via greedy unigram-F1 gap-sentence selection.

A claim is the handful of sentences that best summarize the article: we
grow a selected set greedily, each round scoring every unselected sentence
by the unigram F1 between (selected + candidate) and the remaining text,
and adding the argmax. The selected sentences joined in document order are
the extractive claim; replacing them with ``[MASK]`` gives the masked
article body an abstractive generation backend can consume.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable

from .corpus import NewsArticle
from .text import split_sentences, tokenize

MASK_TOKEN = "[MASK]"

# Generation backend: (masked_text, extractive_summary) -> generated claim.
AbstractiveBackend = Callable[[str, str], str]


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str

    @property
    def unigrams(self) -> Counter:
        return Counter(tokenize(self.text))


@dataclass(frozen=True)
class SummarySelection:
    selected: tuple[int, ...]
    scores: tuple[float, ...]
    msr: float


@dataclass(frozen=True)
class Claim:
    text: str
    source_id: str = ""
    step: int = 0

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("empty claim text")


def rouge1_f1(candidate: Iterable[str] | Counter, reference: Iterable[str] | Counter) -> float:
    """Unigram F1 between two token multisets; any zero denominator gives 0."""
    cand = candidate if isinstance(candidate, Counter) else Counter(candidate)
    ref = reference if isinstance(reference, Counter) else Counter(reference)
    n_cand = sum(cand.values())
    n_ref = sum(ref.values())
    if n_cand == 0 or n_ref == 0:
        return 0.0
    overlap = sum(min(count, ref[tok]) for tok, count in cand.items())
    precision = overlap / n_cand
    recall = overlap / n_ref
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def article_sentences(article: NewsArticle) -> list[Sentence]:
    return [Sentence(i, t) for i, t in enumerate(split_sentences(article.text))]


def summary_size(msr: float, n_sentences: int) -> int:
    """Number of gap sentences for a given mask ratio; never zero."""
    if not 0.0 < msr <= 1.0:
        raise ValueError(f"msr must be in (0, 1], got {msr}")
    return max(1, round(msr * n_sentences))


def select_gap_sentences(article: NewsArticle, msr: float = 0.3) -> SummarySelection:
    """Greedy selection of the highest-importance sentences.

    Round scores are recomputed from scratch every round (the selected set
    changes both sides of the F1), and argmax ties break to the lowest
    sentence index for reproducibility.
    """
    sentences = article_sentences(article)
    if not sentences:
        raise ValueError(f"article {article.id!r} has no sentences")
    counts = [s.unigrams for s in sentences]
    total = Counter()
    for c in counts:
        total.update(c)

    m = summary_size(msr, len(sentences))
    selected: list[int] = []
    scores: list[float] = []
    selected_counts = Counter()
    for _ in range(m):
        best_idx = -1
        best_score = -1.0
        for i, c in enumerate(counts):
            if i in selected:
                continue
            candidate = selected_counts + c
            reference = total - candidate
            score = rouge1_f1(candidate, reference)
            if score > best_score:
                best_idx, best_score = i, score
        selected.append(best_idx)
        scores.append(best_score)
        selected_counts += counts[best_idx]
    return SummarySelection(selected=tuple(selected), scores=tuple(scores), msr=msr)


def pseudo_summary(article: NewsArticle, selection: SummarySelection) -> tuple[str, str]:
    """Return (masked article text, selected sentences joined in doc order)."""
    sentences = article_sentences(article)
    chosen = set(selection.selected)
    if not chosen <= set(range(len(sentences))):
        raise ValueError("selection does not match article")
    masked = " ".join(MASK_TOKEN if s.index in chosen else s.text for s in sentences)
    summary = " ".join(s.text for s in sentences if s.index in chosen)
    return masked, summary


def extract_claim(
    article: NewsArticle,
    msr: float = 0.3,
    backend: AbstractiveBackend | None = None,
    flags: list[str] | None = None,
) -> Claim:
    """Distill the article's check-worthy claim.

    Without a backend this is the extractive pseudo-summary. With one, the
    masked text (and the extractive summary for reference) is handed to the
    backend; on backend failure we fall back to the extractive claim and
    record a flag.
    """
    selection = select_gap_sentences(article, msr)
    masked, summary = pseudo_summary(article, selection)
    text = summary
    if backend is not None:
        try:
            generated = backend(masked, summary).strip()
            if not generated:
                raise ValueError("backend returned empty text")
            text = generated
        except Exception as exc:
            if flags is not None:
                flags.append(f"summarizer_fallback: {exc}")
    return Claim(text=text, source_id=article.id, step=0)
