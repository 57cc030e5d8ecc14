import numpy as np
import pytest

from muser.corpus import Paragraph
from muser.embedding import BackendDescriptor, embed, relevance
from muser.index import (
    AnnIndex,
    ExactIndex,
    build_ann,
    build_exact,
    default_nlist,
    default_nprobe,
    load_backend,
    load_index,
    save_index,
    search_ann,
    search_exact,
)


def _placeholder_paragraphs(n):
    return [Paragraph(f"d{i:05d}", 0, "", f"v{i}") for i in range(n)]


def _index_from_matrix(matrix, normalized=True):
    return ExactIndex(
        paragraphs=_placeholder_paragraphs(matrix.shape[0]),
        matrix=matrix.astype(np.float32),
        normalized=normalized,
    )


def _random_unit_matrix(n, d, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, d)).astype(np.float32)
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def naive_scan(index, query, k):
    """Independent oracle: full scan, full sort, same tie rule."""
    scored = [
        (relevance(query, index.matrix[i]), p.doc_id, p.para_id, p)
        for i, p in enumerate(index.paragraphs)
    ]
    scored.sort(key=lambda t: (-t[0], t[1], t[2]))
    return [(t[3].key, t[0]) for t in scored[:k]]


def test_build_exact_from_store(small_store, hashed_backend):
    path, paragraphs = small_store
    index = build_exact(path, hashed_backend)
    assert len(index) == 3
    assert index.dim == hashed_backend.dim
    assert index.paragraphs == paragraphs


def test_build_exact_empty_store_fatal(tmp_path, hashed_backend):
    store = tmp_path / "paragraphs.jsonl"
    store.write_text("")
    (tmp_path / "paragraphs.idx").write_bytes(b"")
    with pytest.raises(ValueError, match="empty"):
        build_exact(store, hashed_backend)


def test_build_exact_rebuild_identical(small_store, hashed_backend):
    path, _ = small_store
    first = build_exact(path, hashed_backend)
    second = build_exact(path, hashed_backend)
    assert np.array_equal(first.matrix, second.matrix)


def test_search_exact_finds_identity(small_store, hashed_backend):
    path, paragraphs = small_store
    index = build_exact(path, hashed_backend)
    query = embed(paragraphs[1].text, hashed_backend)
    hits = search_exact(index, query, k=1)
    assert hits[0].paragraph == paragraphs[1]
    assert hits[0].score == pytest.approx(1.0, abs=1e-6)


def test_search_exact_k_larger_than_size():
    m = _random_unit_matrix(5, 16, seed=1)
    index = _index_from_matrix(m)
    hits = search_exact(index, m[0], k=50)
    assert len(hits) == 5
    scores = [h.score for h in hits]
    assert scores == sorted(scores, reverse=True)


def test_search_exact_tie_breaks_by_key():
    row = np.array([1.0, 0.0], dtype=np.float32)
    matrix = np.stack([row, row, row])
    index = ExactIndex(
        paragraphs=[Paragraph("b", 1, "", "x"), Paragraph("a", 9, "", "y"), Paragraph("a", 2, "", "z")],
        matrix=matrix,
    )
    hits = search_exact(index, row, k=3)
    assert [h.paragraph.key for h in hits] == [("a", 2), ("a", 9), ("b", 1)]


def test_search_exact_matches_naive_oracle():
    m = _random_unit_matrix(200, 32, seed=2)
    index = _index_from_matrix(m)
    rng = np.random.default_rng(3)
    for _ in range(20):
        q = rng.normal(size=32).astype(np.float32)
        q /= np.linalg.norm(q)
        hits = search_exact(index, q, k=10)
        assert [(h.paragraph.key, h.score) for h in hits] == naive_scan(index, q, 10)


def test_search_exact_dim_mismatch():
    index = _index_from_matrix(_random_unit_matrix(4, 8, seed=0))
    with pytest.raises(ValueError, match="dim"):
        search_exact(index, np.zeros(16, dtype=np.float32), k=2)


def test_search_exact_scores_recomputable():
    m = _random_unit_matrix(50, 16, seed=5)
    index = _index_from_matrix(m)
    q = m[7]
    for hit in search_exact(index, q, k=5):
        row = index.paragraphs.index(hit.paragraph)
        assert hit.score == relevance(q, index.matrix[row])


def test_build_ann_nlist_one_holds_everything():
    index = _index_from_matrix(_random_unit_matrix(20, 8, seed=4))
    ann = build_ann(index, nlist=1, seed=0)
    assert len(ann.lists) == 1
    assert sorted(ann.lists[0].tolist()) == list(range(20))


def test_build_ann_nlist_equals_size_gives_singletons():
    # oracle: with centroids at the data points each vector's nearest
    # centroid is itself, so every inverted list is a singleton
    m = _random_unit_matrix(12, 16, seed=6)
    index = _index_from_matrix(m)
    ann = build_ann(index, nlist=12, seed=0)
    sizes = sorted(len(lst) for lst in ann.lists)
    assert sizes == [1] * 12
    covered = sorted(int(r) for lst in ann.lists for r in lst)
    assert covered == list(range(12))
    sims = m @ ann.centroids.T - 0.5 * np.sum(ann.centroids**2, axis=1)
    expected = np.argmax(sims, axis=1)
    for j, lst in enumerate(ann.lists):
        for row in lst:
            assert expected[int(row)] == j


def test_build_ann_partition_property():
    m = _random_unit_matrix(100, 16, seed=7)
    ann = build_ann(_index_from_matrix(m), nlist=8, seed=1)
    covered = sorted(int(r) for lst in ann.lists for r in lst)
    assert covered == list(range(100))
    norms = np.linalg.norm(ann.centroids, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-5)


def test_build_ann_deterministic():
    m = _random_unit_matrix(60, 8, seed=8)
    a = build_ann(_index_from_matrix(m), nlist=6, seed=42)
    b = build_ann(_index_from_matrix(m), nlist=6, seed=42)
    assert np.array_equal(a.centroids, b.centroids)
    assert all(np.array_equal(x, y) for x, y in zip(a.lists, b.lists))


def test_build_ann_nlist_too_large_fatal():
    index = _index_from_matrix(_random_unit_matrix(5, 8, seed=9))
    with pytest.raises(ValueError, match="nlist"):
        build_ann(index, nlist=6, seed=0)


def test_search_ann_full_probe_equals_exact():
    m = _random_unit_matrix(150, 16, seed=10)
    index = _index_from_matrix(m)
    ann = build_ann(index, nlist=10, seed=0)
    rng = np.random.default_rng(11)
    for _ in range(10):
        q = rng.normal(size=16).astype(np.float32)
        q /= np.linalg.norm(q)
        exact = search_exact(index, q, k=7)
        approx = search_ann(ann, q, k=7, nprobe=10)
        assert [(h.paragraph.key, h.score) for h in approx] == [
            (h.paragraph.key, h.score) for h in exact
        ]


def test_search_ann_empty_probed_lists():
    m = np.eye(2, dtype=np.float32)
    index = _index_from_matrix(m)
    ann = AnnIndex(
        exact=index,
        centroids=np.eye(2, dtype=np.float32),
        lists=[np.array([0, 1], dtype=np.int64), np.array([], dtype=np.int64)],
        nlist=2,
        seed=0,
    )
    query = np.array([0.0, 1.0], dtype=np.float32)
    assert search_ann(ann, query, k=3, nprobe=1) == []


def test_search_ann_nprobe_validation():
    m = _random_unit_matrix(10, 8, seed=12)
    ann = build_ann(_index_from_matrix(m), nlist=3, seed=0)
    with pytest.raises(ValueError, match="nprobe"):
        search_ann(ann, m[0], k=2, nprobe=4)


def test_defaults():
    assert default_nlist(100) == 10
    assert default_nlist(1) == 1
    assert default_nprobe(100) == 10
    assert default_nprobe(5) == 1


def test_persistence_round_trip(tmp_path, small_store, hashed_backend):
    path, _ = small_store
    index = build_exact(path, hashed_backend)
    ann = build_ann(index, nlist=2, seed=0)
    save_index(ann, tmp_path / "idx", path, hashed_backend)
    assert (tmp_path / "idx" / "vectors.f32").exists()
    assert (tmp_path / "idx" / "index.meta").exists()
    assert (tmp_path / "idx" / "ivf.lists").exists()

    loaded = load_index(tmp_path / "idx")
    assert isinstance(loaded, AnnIndex)
    assert np.array_equal(loaded.exact.matrix, index.matrix)
    assert np.array_equal(loaded.centroids, ann.centroids)
    assert all(np.array_equal(a, b) for a, b in zip(loaded.lists, ann.lists))
    assert load_backend(tmp_path / "idx") == hashed_backend

    q = embed("quick brown fox", hashed_backend)
    before = [(h.paragraph.key, h.score) for h in search_ann(ann, q, 3, nprobe=2)]
    after = [(h.paragraph.key, h.score) for h in search_ann(loaded, q, 3, nprobe=2)]
    assert before == after


def test_persistence_exact_only(tmp_path, small_store, hashed_backend):
    path, _ = small_store
    index = build_exact(path, hashed_backend)
    save_index(index, tmp_path / "idx", path, hashed_backend)
    assert not (tmp_path / "idx" / "ivf.lists").exists()
    loaded = load_index(tmp_path / "idx")
    assert isinstance(loaded, ExactIndex)
    assert np.array_equal(loaded.matrix, index.matrix)
