"""FastAPI application exposing the four model endpoints plus /health.

Requests are stateless and responses are deterministic for identical
inputs (echo mode always; transformers mode in eval). The embedding dim
reported by /health is the dim of every /embed response.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .config import ServerConfig
from .echo import EchoClassifier, EchoEmbedder, EchoReformulator, EchoTagger


class EmbedRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


class TagRequest(BaseModel):
    claim: str = Field(min_length=1)
    passage: str = Field(min_length=1)


class ClassifyRequest(BaseModel):
    claim: str = Field(min_length=1)
    evidence: list[str] = Field(default_factory=list)


class ReformulateRequest(BaseModel):
    query: str = Field(min_length=1)
    snippet: str = ""


def _load_component(name: str, loader):
    try:
        return loader(), name
    except Exception as exc:  # missing package, checkpoint, or network
        return None, f"unavailable ({type(exc).__name__})"


def create_app(config: ServerConfig | None = None) -> FastAPI:
    config = config or ServerConfig()
    app = FastAPI(title="model-server")

    if config.mode == "echo":
        embedder = EchoEmbedder(config.dim, config.max_text_tokens)
        tagger = EchoTagger()
        classifier = EchoClassifier()
        reformulator = EchoReformulator()
        statuses = {k: "echo" for k in ("embedder", "tagger", "classifier", "reformulator")}
        dim = config.dim
    else:
        from . import models as hf

        embedder, emb_status = _load_component(
            config.embedder_model,
            lambda: hf.HfEmbedder(config.embedder_model, config.device, config.max_text_tokens),
        )
        tagger, tag_status = _load_component(
            config.tagger_model,
            lambda: hf.HfTagger(config.tagger_model, config.device, config.max_text_tokens),
        )
        classifier, cls_status = _load_component(
            config.classifier_model,
            lambda: hf.HfClassifier(config.classifier_model, config.device, config.max_text_tokens),
        )
        reformulator, ref_status = _load_component(
            config.reformulator_model,
            lambda: hf.HfReformulator(config.reformulator_model, config.device, config.max_text_tokens),
        )
        statuses = {
            "embedder": emb_status,
            "tagger": tag_status,
            "classifier": cls_status,
            "reformulator": ref_status,
        }
        dim = embedder.dim if embedder is not None else config.dim

    def require(component, name):
        if component is None:
            raise HTTPException(status_code=503, detail=f"{name} model not loaded")
        return component

    @app.get("/health")
    def health():
        return {"dim": dim, "models": statuses}

    @app.post("/embed")
    def embed(req: EmbedRequest):
        if len(req.texts) > config.max_batch:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {len(req.texts)} exceeds max batch size {config.max_batch}",
            )
        vectors = require(embedder, "embedder").embed(req.texts)
        return {"vectors": vectors, "dim": dim}

    @app.post("/tag")
    def tag(req: TagRequest):
        return require(tagger, "tagger").tag(req.claim, req.passage)

    @app.post("/classify")
    def classify(req: ClassifyRequest):
        prob = require(classifier, "classifier").classify(req.claim, req.evidence)
        return {"prob_true": max(0.0, min(1.0, float(prob)))}

    @app.post("/reformulate")
    def reformulate(req: ReformulateRequest):
        text = require(reformulator, "reformulator").reformulate(req.query, req.snippet)
        return {"text": text}

    return app
