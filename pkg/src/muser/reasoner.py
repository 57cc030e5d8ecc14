"""Verdict inference from a claim and its gathered evidence.

The remote backend defers to a trained classifier service. The built-in
baseline maps the best claim-evidence relevance through a logistic curve;
it is a deterministic stand-in, not a trained verifier, and its slope and
midpoint are configurable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import remote
from .controller import RetrievalTrace
from .embedding import BackendDescriptor
from .evidence import EvidenceSnippet
from .remote import BackendError
from .summarize import Claim


@dataclass(frozen=True)
class ReasonerBackend:
    kind: str = "similarity_baseline"
    endpoint: str | None = None
    slope: float = 10.0
    midpoint: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in ("similarity_baseline", "remote"):
            raise ValueError(f"unknown reasoner kind: {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote reasoner requires an endpoint")


@dataclass(frozen=True)
class Verdict:
    label: int  # 0 = fake, 1 = true
    prob_true: float
    trace: RetrievalTrace


def _baseline_prob(evidence: list[EvidenceSnippet], backend: ReasonerBackend) -> float:
    # Floored at the no-evidence level: anti-correlated snippets are treated
    # as no better than nothing, which keeps the score monotone in evidence.
    s = max(0.0, max((e.score for e in evidence), default=0.0))
    return 1.0 / (1.0 + math.exp(-backend.slope * (s - backend.midpoint)))


def classify(
    claim: Claim,
    evidence: list[EvidenceSnippet],
    backend: ReasonerBackend,
    trace: RetrievalTrace,
    embedding: BackendDescriptor | None = None,
    flags: list[str] | None = None,
) -> Verdict:
    """Produce the verdict; ties at probability 0.5 resolve to true.

    Evidence is passed to a remote classifier in score-descending order.
    A remote failure falls back to the similarity baseline with a flag.
    """
    ordered = sorted(evidence, key=lambda e: -e.score)
    prob = None
    if backend.kind == "remote":
        try:
            prob = remote.classify_remote(backend.endpoint, claim.text, [e.text for e in ordered])
        except BackendError as exc:
            if flags is not None:
                flags.append(f"reasoner_fallback: {exc}")
    if prob is None:
        prob = _baseline_prob(ordered, backend)
    return Verdict(label=1 if prob >= 0.5 else 0, prob_true=prob, trace=trace)


def verdict_to_dict(verdict: Verdict) -> dict:
    return {"label": verdict.label, "prob_true": verdict.prob_true}
