"""The multi-step retrieval loop.

Each step retrieves a budgeted batch of paragraphs for the current query,
scores candidate evidence snippets, and stops as soon as the best snippet
clears the relevance threshold. Otherwise the step's best snippet (the
winner) is folded into the query and retrieval repeats, up to the step
budget. The full per-step record is kept as an auditable trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import remote
from .embedding import BackendDescriptor, embed
from .evidence import MAX_SNIPPETS_PER_STEP, EvidenceSnippet, score_sentences, tagger_spans
from .index import AnnIndex, ExactIndex, ScoredParagraph, default_nprobe, search_ann, search_exact
from .remote import BackendError
from .summarize import Claim

QUERY_TOKEN_LIMIT = 512
SEP_TOKEN = "[SEP]"

STOP_EVIDENCE_FOUND = "evidence_found"
STOP_BUDGET_EXHAUSTED = "budget_exhausted"
STOP_EMPTY_RETRIEVAL = "empty_retrieval"


@dataclass(frozen=True)
class ControllerConfig:
    lambda_: float = 0.9
    max_steps: int = 3
    budgets: tuple[int, ...] = (30, 30, 30)
    selection_method: str = "threshold"
    dedupe: bool = True
    nprobe: int | None = None

    def __post_init__(self) -> None:
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if len(self.budgets) < self.max_steps:
            raise ValueError(f"need {self.max_steps} step budgets, got {len(self.budgets)}")
        if any(b < 1 for b in self.budgets):
            raise ValueError("every step budget must be >= 1")
        if self.selection_method not in ("threshold", "tagger"):
            raise ValueError(f"unknown selection method: {self.selection_method!r}")


@dataclass(frozen=True)
class Backends:
    embedding: BackendDescriptor
    tagger_endpoint: str | None = None
    reformulate_endpoint: str | None = None
    classify_endpoint: str | None = None


@dataclass
class StepRecord:
    query: Claim
    retrieved: list[ScoredParagraph]
    snippets: list[EvidenceSnippet]
    winner: EvidenceSnippet | None


@dataclass
class RetrievalTrace:
    steps: list[StepRecord]
    stop_reason: str
    flags: list[str] = field(default_factory=list)

    def kept_snippets(self, lam: float) -> list[list[EvidenceSnippet]]:
        return [[s for s in step.snippets if s.score > lam] for step in self.steps]

    @property
    def evidence(self) -> list[EvidenceSnippet]:
        """Best candidates pooled across steps, the set a verdict is judged on."""
        pooled = [s for step in self.steps for s in step.snippets]
        pooled.sort(key=lambda s: -s.score)
        return pooled[:MAX_SNIPPETS_PER_STEP]


def reformulate(
    query: Claim,
    winner: EvidenceSnippet,
    backend_endpoint: str | None = None,
    flags: list[str] | None = None,
) -> Claim:
    """Fold the winner snippet into the query for the next retrieval step.

    With a remote reformulator its generated text is used; otherwise the
    query and snippet are joined with a separator and trimmed to the token
    limit, dropping the oldest query tokens first and never the snippet.
    """
    if not winner.text.strip():
        raise ValueError("winner snippet is empty")
    text = None
    if backend_endpoint:
        try:
            text = remote.reformulate_remote(backend_endpoint, query.text, winner.text)
        except BackendError as exc:
            if flags is not None:
                flags.append(f"reformulate_fallback: {exc}")
    if text is None:
        q_toks = query.text.split()
        s_toks = winner.text.split()
        room = QUERY_TOKEN_LIMIT - len(s_toks) - 1
        kept = q_toks[-room:] if room > 0 else []
        text = " ".join(kept + [SEP_TOKEN] + s_toks)
    return Claim(text=text, source_id=query.source_id, step=query.step + 1)


def _search(index: ExactIndex | AnnIndex, query_vec, k: int, config: ControllerConfig):
    if isinstance(index, AnnIndex):
        nprobe = config.nprobe or default_nprobe(index.nlist)
        return search_ann(index, query_vec, k, nprobe)
    return search_exact(index, query_vec, k)


def _step_candidates(
    query: Claim,
    query_vec,
    retrieved: list[ScoredParagraph],
    config: ControllerConfig,
    backends: Backends,
    step_found: int,
    flags: list[str],
) -> list[EvidenceSnippet]:
    if config.selection_method == "tagger" and backends.tagger_endpoint:
        snippets: list[EvidenceSnippet] = []
        for sp in retrieved:
            try:
                snippets.extend(
                    tagger_spans(query, sp.paragraph, backends.tagger_endpoint,
                                 backends.embedding, step_found=step_found)
                )
            except BackendError as exc:
                flags.append(f"step{step_found} tagger_fallback: {exc}")
                snippets.extend(
                    score_sentences(query_vec, [sp], backends.embedding, step_found=step_found)
                )
        snippets.sort(key=lambda s: -s.score)
        return snippets[:MAX_SNIPPETS_PER_STEP]
    return score_sentences(query_vec, retrieved, backends.embedding, step_found=step_found)


def run(
    claim: Claim,
    index: ExactIndex | AnnIndex,
    config: ControllerConfig,
    backends: Backends,
) -> RetrievalTrace:
    """Run the retrieval loop for one claim and return its trace."""
    if not claim.text.strip():
        raise ValueError("empty claim")
    flags: list[str] = []
    steps: list[StepRecord] = []
    seen: set[tuple[str, int]] = set()
    query = claim
    stop = STOP_BUDGET_EXHAUSTED
    for i in range(config.max_steps):
        budget = config.budgets[i]
        query_vec = embed(query.text, backends.embedding)
        k = budget + (len(seen) if config.dedupe else 0)
        hits = _search(index, query_vec, k, config)
        if config.dedupe:
            hits = [h for h in hits if h.paragraph.key not in seen]
        hits = hits[:budget]
        if not hits:
            steps.append(StepRecord(query=query, retrieved=[], snippets=[], winner=None))
            stop = STOP_EMPTY_RETRIEVAL
            break
        seen.update(h.paragraph.key for h in hits)
        snippets = _step_candidates(query, query_vec, hits, config, backends, i + 1, flags)
        winner = snippets[0] if snippets else None
        steps.append(StepRecord(query=query, retrieved=hits, snippets=snippets, winner=winner))
        if winner is not None and winner.score > config.lambda_:
            stop = STOP_EVIDENCE_FOUND
            break
        if i + 1 == config.max_steps:
            stop = STOP_BUDGET_EXHAUSTED
            break
        if winner is not None:
            query = reformulate(query, winner, backends.reformulate_endpoint, flags)
        else:
            flags.append(f"step{i + 1}: no snippet candidates, query carried over")
            query = Claim(text=query.text, source_id=query.source_id, step=query.step + 1)
    return RetrievalTrace(steps=steps, stop_reason=stop, flags=flags)


def _claim_dict(c: Claim) -> dict:
    return {"source_id": c.source_id, "step": c.step, "text": c.text}


def _snippet_dict(s: EvidenceSnippet) -> dict:
    return {
        "doc_id": s.source[0],
        "para_id": s.source[1],
        "score": s.score,
        "sentence_index": s.source[2],
        "step_found": s.step_found,
        "text": s.text,
    }


def trace_to_dict(trace: RetrievalTrace) -> dict:
    return {
        "flags": list(trace.flags),
        "steps": [
            {
                "query": _claim_dict(step.query),
                "retrieved": [
                    {
                        "doc_id": sp.paragraph.doc_id,
                        "para_id": sp.paragraph.para_id,
                        "score": sp.score,
                        "title": sp.paragraph.title,
                    }
                    for sp in step.retrieved
                ],
                "snippets": [_snippet_dict(s) for s in step.snippets],
                "winner": _snippet_dict(step.winner) if step.winner else None,
            }
            for step in trace.steps
        ],
        "stop_reason": trace.stop_reason,
    }


def trace_json(trace: RetrievalTrace, run_config: dict | None = None) -> str:
    """Serialize with stable key order so identical runs are byte-identical."""
    doc = trace_to_dict(trace)
    if run_config is not None:
        doc["run_config"] = run_config
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2)
