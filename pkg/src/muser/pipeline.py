"""End-to-end verification glue: article -> claim -> trace -> verdict."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import controller
from .config import RunConfig
from .controller import Backends, ControllerConfig, RetrievalTrace
from .corpus import NewsArticle
from .index import AnnIndex, ExactIndex
from .metrics import MetricsReport, compute_metrics
from .reasoner import ReasonerBackend, Verdict, classify
from .remote import post_json
from .summarize import AbstractiveBackend, Claim, extract_claim


def http_abstractive_backend(url: str) -> AbstractiveBackend:
    """Generation backend over HTTP: posts the masked article body."""

    def generate(masked_text: str, summary: str) -> str:
        body = post_json(url, {"masked_text": masked_text, "summary": summary})
        return str(body.get("text", ""))

    return generate


@dataclass
class Pipeline:
    index: ExactIndex | AnnIndex
    backends: Backends
    controller_config: ControllerConfig
    reasoner: ReasonerBackend
    msr: float = 0.3
    summarize_backend: AbstractiveBackend | None = None
    run_config: dict = field(default_factory=dict)

    @classmethod
    def from_config(cls, config: RunConfig, index: ExactIndex | AnnIndex) -> "Pipeline":
        from . import remote

        remote.set_max_inflight(int(config["embedding"]["max_inflight"]))
        summarize_url = config["summarizer"]["backend"]
        return cls(
            index=index,
            backends=config.backends(),
            controller_config=config.controller_config(),
            reasoner=config.reasoner_backend(),
            msr=float(config["summarizer"]["msr"]),
            summarize_backend=http_abstractive_backend(summarize_url) if summarize_url else None,
            run_config=config.to_dict(),
        )

    def verify_claim(self, claim: Claim, pre_flags: list[str] | None = None) -> Verdict:
        trace = controller.run(claim, self.index, self.controller_config, self.backends)
        if pre_flags:
            trace.flags[0:0] = pre_flags
        return classify(claim, trace.evidence, self.reasoner, trace, flags=trace.flags)

    def verify_article(self, article: NewsArticle) -> Verdict:
        flags: list[str] = []
        claim = extract_claim(article, self.msr, self.summarize_backend, flags)
        return self.verify_claim(claim, pre_flags=flags)


def evaluate(
    pipeline: Pipeline, articles: list[NewsArticle], jobs: int = 1
) -> tuple[MetricsReport, list[tuple[str, int, int]]]:
    """Verify every labeled article; returns metrics and (id, pred, gold) rows."""
    labeled = [a for a in articles if a.label is not None]
    if not labeled:
        raise ValueError("no labeled articles to evaluate")

    def one(article: NewsArticle) -> tuple[str, int, int]:
        verdict = pipeline.verify_article(article)
        return (article.id, verdict.label, article.label)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, labeled))
    else:
        rows = [one(a) for a in labeled]
    report = compute_metrics([r[1] for r in rows], [r[2] for r in rows])
    return report, rows


def trace_of(verdict: Verdict) -> RetrievalTrace:
    return verdict.trace
