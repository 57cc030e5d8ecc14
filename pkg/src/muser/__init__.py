"""Evidence-retrieval engine for news claim verification.

The pipeline distills an article into a check-worthy claim, retrieves
supporting paragraphs from a corpus over multiple reformulation steps,
selects key evidence snippets against a relevance threshold, and emits a
verdict together with the full retrieval trace.
"""

from .controller import Backends, ControllerConfig, RetrievalTrace, reformulate, run
from .corpus import DatasetSplit, NewsArticle, Paragraph, ingest_wiki, load_dataset, split
from .embedding import BackendDescriptor, embed, embed_batch, relevance
from .evidence import BioTagSequence, EvidenceSnippet, decode_bio, select_by_tagger, select_by_threshold
from .index import AnnIndex, ExactIndex, ScoredParagraph, build_ann, build_exact, search_ann, search_exact
from .metrics import MetricsReport, compute_metrics
from .pipeline import Pipeline, evaluate
from .reasoner import ReasonerBackend, Verdict, classify
from .summarize import Claim, SummarySelection, extract_claim, pseudo_summary, rouge1_f1, select_gap_sentences

__version__ = "0.1.0"

__all__ = [
    "AnnIndex", "BackendDescriptor", "Backends", "BioTagSequence", "Claim",
    "ControllerConfig", "DatasetSplit", "EvidenceSnippet", "ExactIndex",
    "MetricsReport", "NewsArticle", "Paragraph", "Pipeline", "ReasonerBackend",
    "RetrievalTrace", "ScoredParagraph", "SummarySelection", "Verdict",
    "build_ann", "build_exact", "classify", "compute_metrics", "decode_bio",
    "embed", "embed_batch", "evaluate", "extract_claim", "ingest_wiki",
    "load_dataset", "pseudo_summary", "reformulate", "relevance", "rouge1_f1",
    "run", "search_ann", "search_exact", "select_by_tagger",
    "select_by_threshold", "select_gap_sentences", "split",
]
