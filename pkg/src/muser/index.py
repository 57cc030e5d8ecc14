"""Top-k paragraph retrieval: exact dot-product scan and an IVF index.

The exact index is a row-major float32 matrix aligned to the paragraph
store. The approximate index is a coarse k-means quantizer (fixed 20 Lloyd
iterations under a seed, for run-to-run determinism) with one inverted
list per centroid; searches probe the nprobe nearest centroids only.

Returned scores are always produced by the same ``relevance`` function a
caller would use to recompute them, so they are reproducible bit-for-bit.
"""

from __future__ import annotations

import heapq
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Paragraph, read_store
from .embedding import BackendDescriptor, embed_batch, relevance, unit_normalize

KMEANS_ITERS = 20

VECTORS_FILE = "vectors.f32"
META_FILE = "index.meta"
IVF_FILE = "ivf.lists"
_IVF_MAGIC = b"IVF1"


@dataclass
class ExactIndex:
    paragraphs: list[Paragraph]
    matrix: np.ndarray
    normalized: bool = True

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.paragraphs):
            raise ValueError("matrix rows must align with paragraphs")
        self.matrix = np.ascontiguousarray(self.matrix, dtype=np.float32)

    def __len__(self) -> int:
        return len(self.paragraphs)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


@dataclass
class AnnIndex:
    exact: ExactIndex
    centroids: np.ndarray
    lists: list[np.ndarray]
    nlist: int
    seed: int


@dataclass(frozen=True)
class ScoredParagraph:
    paragraph: Paragraph
    score: float


def build_exact(store: str | Path, backend: BackendDescriptor) -> ExactIndex:
    """Embed every stored paragraph once; order follows the store."""
    paragraphs = read_store(store)
    if not paragraphs:
        raise ValueError(f"store is empty: {store}")
    matrix = embed_batch([p.text for p in paragraphs], backend)
    return ExactIndex(paragraphs=paragraphs, matrix=matrix, normalized=backend.normalize)


def _top_k(index: ExactIndex, query: np.ndarray, k: int, rows: np.ndarray | None = None) -> list[ScoredParagraph]:
    if query.shape != (index.dim,):
        raise ValueError(f"query dim {query.shape} != index dim {index.dim}")
    if k < 1:
        raise ValueError("k must be positive")
    candidates = range(len(index)) if rows is None else rows
    scored = (
        (relevance(query, index.matrix[row]), index.paragraphs[row])
        for row in candidates
    )
    best = heapq.nsmallest(k, scored, key=lambda sp: (-sp[0], sp[1].doc_id, sp[1].para_id))
    return [ScoredParagraph(paragraph=p, score=s) for s, p in best]


def search_exact(index: ExactIndex, query: np.ndarray, k: int) -> list[ScoredParagraph]:
    """The k best paragraphs, score descending, ties by (doc_id, para_id)."""
    return _top_k(index, query, k)


def _row_normalize(m: np.ndarray) -> np.ndarray:
    return np.stack([unit_normalize(row) for row in m])


def build_ann(index: ExactIndex, nlist: int, seed: int) -> AnnIndex:
    """Seeded k-means coarse quantizer over the stored vectors.

    Initial centroids are nlist distinct data rows; each Lloyd iteration
    assigns rows to the nearest centroid (squared-distance form) and
    re-centers. Centroids are kept unit length when the data is, so the
    probe order under dot-product search matches the assignment metric.
    A centroid that loses all members keeps its previous position.
    """
    n = len(index)
    if not 1 <= nlist <= n:
        raise ValueError(f"nlist must be in [1, {n}], got {nlist}")
    X = index.matrix
    rng = np.random.default_rng(seed)
    centroids = X[rng.choice(n, size=nlist, replace=False)].copy()
    if index.normalized:
        centroids = _row_normalize(centroids)
    for _ in range(KMEANS_ITERS):
        assign = _assign(X, centroids)
        for j in range(nlist):
            members = X[assign == j]
            if len(members):
                c = members.mean(axis=0).astype(np.float32)
                centroids[j] = unit_normalize(c) if index.normalized else c
    assign = _assign(X, centroids)
    lists = [np.flatnonzero(assign == j) for j in range(nlist)]
    return AnnIndex(exact=index, centroids=centroids, lists=lists, nlist=nlist, seed=seed)


def _assign(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # argmin ||x - c||^2 == argmax (x.c - ||c||^2 / 2); ties go to the
    # lowest centroid index.
    scores = X @ centroids.T - 0.5 * np.sum(centroids * centroids, axis=1)
    return np.argmax(scores, axis=1)


def default_nlist(n: int) -> int:
    return max(1, int(np.ceil(np.sqrt(n))))


def default_nprobe(nlist: int) -> int:
    return max(1, nlist // 10)


def search_ann(index: AnnIndex, query: np.ndarray, k: int, nprobe: int) -> list[ScoredParagraph]:
    """Scan only the nprobe nearest centroids' lists; exact-search tie rules."""
    if not 1 <= nprobe <= index.nlist:
        raise ValueError(f"nprobe must be in [1, {index.nlist}], got {nprobe}")
    sims = index.centroids @ query.astype(np.float32)
    probe = np.argsort(-sims, kind="stable")[:nprobe]
    rows_lists = [index.lists[j] for j in probe if len(index.lists[j])]
    if not rows_lists:
        return []
    rows = np.concatenate(rows_lists)
    return _top_k(index.exact, query, k, rows=rows)


def save_index(index: ExactIndex | AnnIndex, out_dir: str | Path, store_path: str | Path,
               backend: BackendDescriptor) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    exact = index.exact if isinstance(index, AnnIndex) else index
    (out_dir / VECTORS_FILE).write_bytes(exact.matrix.tobytes())
    meta = {
        "dim": exact.dim,
        "count": len(exact),
        "normalized": exact.normalized,
        "store": str(store_path),
        "backend": {
            "kind": backend.kind,
            "dim": backend.dim,
            "endpoint": backend.endpoint,
            "normalize": backend.normalize,
            "seed": backend.seed,
        },
    }
    if isinstance(index, AnnIndex):
        meta["nlist"] = index.nlist
        meta["seed"] = index.seed
        _write_ivf(out_dir / IVF_FILE, index)
    (out_dir / META_FILE).write_text(json.dumps(meta, indent=2, sort_keys=True))


def load_index(index_dir: str | Path, store_path: str | Path | None = None) -> ExactIndex | AnnIndex:
    index_dir = Path(index_dir)
    meta = json.loads((index_dir / META_FILE).read_text())
    store = Path(store_path) if store_path else Path(meta["store"])
    paragraphs = read_store(store)
    if len(paragraphs) != meta["count"]:
        raise ValueError(f"store has {len(paragraphs)} paragraphs, index expects {meta['count']}")
    matrix = np.frombuffer((index_dir / VECTORS_FILE).read_bytes(), dtype=np.float32)
    matrix = matrix.reshape(meta["count"], meta["dim"]).copy()
    exact = ExactIndex(paragraphs=paragraphs, matrix=matrix, normalized=meta["normalized"])
    ivf_path = index_dir / IVF_FILE
    if not ivf_path.exists():
        return exact
    centroids, lists = _read_ivf(ivf_path)
    return AnnIndex(exact=exact, centroids=centroids, lists=lists,
                    nlist=len(lists), seed=meta.get("seed", 0))


def load_backend(index_dir: str | Path) -> BackendDescriptor:
    meta = json.loads((Path(index_dir) / META_FILE).read_text())
    return BackendDescriptor(**meta["backend"])


def _write_ivf(path: Path, index: AnnIndex) -> None:
    with open(path, "wb") as fh:
        fh.write(_IVF_MAGIC)
        fh.write(struct.pack("<II", index.nlist, index.centroids.shape[1]))
        fh.write(index.centroids.astype(np.float32).tobytes())
        for rows in index.lists:
            fh.write(struct.pack("<Q", len(rows)))
            fh.write(np.asarray(rows, dtype=np.uint64).tobytes())


def _read_ivf(path: Path) -> tuple[np.ndarray, list[np.ndarray]]:
    data = path.read_bytes()
    if data[:4] != _IVF_MAGIC:
        raise ValueError(f"not an IVF lists file: {path}")
    nlist, dim = struct.unpack_from("<II", data, 4)
    off = 12
    centroids = np.frombuffer(data, dtype=np.float32, count=nlist * dim, offset=off)
    centroids = centroids.reshape(nlist, dim).copy()
    off += nlist * dim * 4
    lists = []
    for _ in range(nlist):
        (count,) = struct.unpack_from("<Q", data, off)
        off += 8
        rows = np.frombuffer(data, dtype=np.uint64, count=count, offset=off).astype(np.int64)
        off += count * 8
        lists.append(rows)
    return centroids, lists
