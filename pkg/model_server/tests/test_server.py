import random

import pytest
from fastapi.testclient import TestClient

from model_server import ServerConfig, create_app


@pytest.fixture(scope="module")
def client():
    app = create_app(ServerConfig(mode="echo", dim=64, max_batch=8))
    with TestClient(app) as c:
        yield c


def test_health_reports_dim_and_models(client):
    body = client.get("/health").json()
    assert body["dim"] == 64
    assert set(body["models"]) == {"embedder", "tagger", "classifier", "reformulator"}
    assert all(v == "echo" for v in body["models"].values())


def test_embed_single_text(client):
    body = client.post("/embed", json={"texts": ["hello world"]}).json()
    assert body["dim"] == 64
    assert len(body["vectors"]) == 1
    assert len(body["vectors"][0]) == 64


def test_embed_batch_and_health_dims_agree(client):
    health_dim = client.get("/health").json()["dim"]
    body = client.post("/embed", json={"texts": ["a", "b", "c"]}).json()
    assert body["dim"] == health_dim
    assert all(len(v) == health_dim for v in body["vectors"])


def test_embed_deterministic(client):
    first = client.post("/embed", json={"texts": ["repeatable text"]}).json()
    second = client.post("/embed", json={"texts": ["repeatable text"]}).json()
    assert first == second


def test_embed_unit_norm(client):
    (vec,) = client.post("/embed", json={"texts": ["some words here"]}).json()["vectors"]
    norm = sum(v * v for v in vec) ** 0.5
    assert norm == pytest.approx(1.0, abs=1e-6)


def test_embed_empty_text_zero_vector(client):
    (vec,) = client.post("/embed", json={"texts": [""]}).json()["vectors"]
    assert all(v == 0.0 for v in vec)


def test_embed_overlong_batch_413(client):
    resp = client.post("/embed", json={"texts": ["x"] * 9})
    assert resp.status_code == 413
    assert "8" in resp.json()["detail"]


def test_embed_empty_batch_rejected(client):
    assert client.post("/embed", json={"texts": []}).status_code == 422


def test_tag_token_tag_length_equality(client):
    body = client.post(
        "/tag", json={"claim": "alpha beta", "passage": "alpha beta gamma. other words."}
    ).json()
    assert len(body["tokens"]) == len(body["tags"])
    assert len(body["tokens"]) == len(body["offsets"])
    assert set(body["tags"]) <= {"O", "B", "I"}


def test_tag_offsets_monotone_non_overlapping(client):
    body = client.post(
        "/tag", json={"claim": "x", "passage": "one two three four."}
    ).json()
    offsets = body["offsets"]
    assert all(a < b for a, b in offsets)
    assert all(offsets[i][1] <= offsets[i + 1][0] for i in range(len(offsets) - 1))


def test_tag_marks_overlapping_sentence(client):
    body = client.post(
        "/tag",
        json={"claim": "glaciers carve valleys", "passage": "unrelated words. glaciers carve valleys."},
    ).json()
    tagged = [t for t, g in zip(body["tokens"], body["tags"]) if g != "O"]
    assert tagged == ["glaciers", "carve", "valleys."]
    first_tagged = body["tags"].index("B")
    assert body["tags"][first_tagged + 1] == "I"


def test_tag_no_overlap_all_outside(client):
    body = client.post("/tag", json={"claim": "zzz", "passage": "alpha beta gamma."}).json()
    assert set(body["tags"]) == {"O"}


def test_tag_requires_both_fields(client):
    assert client.post("/tag", json={"claim": "", "passage": "x"}).status_code == 422
    assert client.post("/tag", json={"claim": "x", "passage": ""}).status_code == 422


def test_classify_prob_bounds_random_inputs(client):
    rng = random.Random(0)
    words = ["alpha", "beta", "gamma", "delta", "epsilon"]
    for _ in range(100):
        claim = " ".join(rng.choice(words) for _ in range(rng.randint(1, 5)))
        evidence = [
            " ".join(rng.choice(words) for _ in range(rng.randint(0, 5)))
            for _ in range(rng.randint(0, 3))
        ]
        prob = client.post("/classify", json={"claim": claim, "evidence": evidence}).json()[
            "prob_true"
        ]
        assert 0.0 <= prob <= 1.0


def test_classify_empty_evidence_accepted(client):
    resp = client.post("/classify", json={"claim": "anything", "evidence": []})
    assert resp.status_code == 200
    assert resp.json()["prob_true"] == 0.0


def test_classify_full_overlap_is_one(client):
    prob = client.post(
        "/classify", json={"claim": "alpha beta", "evidence": ["alpha beta gamma"]}
    ).json()["prob_true"]
    assert prob == 1.0


def test_reformulate_contains_snippet_token(client):
    body = client.post(
        "/reformulate", json={"query": "who won", "snippet": "alice won the prize"}
    ).json()
    assert body["text"]
    assert "alice" in body["text"].split()


def test_reformulate_identical_requests_identical_responses(client):
    payload = {"query": "q text", "snippet": "s text"}
    assert client.post("/reformulate", json=payload).json() == client.post(
        "/reformulate", json=payload
    ).json()


def test_transformers_mode_unavailable_models_503():
    # bogus checkpoints cannot load (no network in tests): endpoints go 503
    app = create_app(
        ServerConfig(
            mode="transformers",
            embedder_model="definitely/not-a-real-checkpoint",
            tagger_model="",
            classifier_model="",
            reformulator_model="",
        )
    )
    with TestClient(app) as c:
        health = c.get("/health").json()
        assert "unavailable" in health["models"]["embedder"]
        assert c.post("/embed", json={"texts": ["x"]}).status_code == 503
        assert c.post("/tag", json={"claim": "a", "passage": "b"}).status_code == 503
        assert c.post("/classify", json={"claim": "a", "evidence": []}).status_code == 503
        assert c.post("/reformulate", json={"query": "a", "snippet": "b"}).status_code == 503
