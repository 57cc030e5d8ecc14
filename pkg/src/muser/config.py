"""Run configuration: built-in defaults, env vars, TOML file, CLI flags.

Precedence, weakest first: defaults < environment < config file < flags.
The merged mapping is embedded verbatim in every output JSON so any result
names the exact configuration that produced it.

Environment variables: MUSER_MODEL_SERVER supplies a base URL for all
remote endpoints; MUSER_SEED seeds the hashed backend and the quantizer.
"""

from __future__ import annotations

import copy
import os
import sys
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .controller import Backends, ControllerConfig
from .embedding import BackendDescriptor
from .reasoner import ReasonerBackend

DEFAULTS: dict[str, dict[str, Any]] = {
    "corpus": {
        "store": "",
        "granularity": "paragraph",
    },
    "embedding": {
        "kind": "hashed",
        "dim": 256,
        "endpoint": "",
        "normalize": True,
        "seed": 0,
        "max_inflight": 4,
    },
    "summarizer": {
        "msr": 0.3,
        "backend": "",
    },
    "index": {
        "dir": "",
        "ann": False,
        "nlist": 0,  # 0 = ceil(sqrt(n)) at build time
        "nprobe": 0,  # 0 = nlist // 10 at search time
        "seed": 0,
    },
    "controller": {
        "lambda": 0.9,
        "max_steps": 3,
        "budgets": [30, 30, 30],
        "method": "threshold",
        "dedupe": True,
        "tagger": "",
        "reformulator": "",
    },
    "reasoner": {
        "kind": "similarity_baseline",
        "endpoint": "",
        "slope": 10.0,
        "midpoint": 0.5,
    },
    "eval": {
        "jobs": 1,
        "seed": 0,
    },
}


def _merge(base: dict, overlay: Mapping) -> dict:
    out = copy.deepcopy(base)
    for section, values in overlay.items():
        if not isinstance(values, Mapping):
            raise ValueError(f"config section {section!r} must be a table")
        dest = out.setdefault(section, {})
        for key, value in values.items():
            dest[key] = value
    return out


def _env_overlay(env: Mapping[str, str]) -> dict:
    overlay: dict[str, dict[str, Any]] = {}
    base = env.get("MUSER_MODEL_SERVER", "").rstrip("/")
    if base:
        overlay["embedding"] = {"endpoint": f"{base}/embed"}
        overlay["controller"] = {"tagger": f"{base}/tag", "reformulator": f"{base}/reformulate"}
        overlay["reasoner"] = {"endpoint": f"{base}/classify"}
    seed = env.get("MUSER_SEED", "")
    if seed:
        overlay.setdefault("embedding", {})["seed"] = int(seed)
        overlay["index"] = {"seed": int(seed)}
        overlay["eval"] = {"seed": int(seed)}
    return overlay


class RunConfig:
    def __init__(self, settings: dict[str, dict[str, Any]]):
        self.settings = settings

    @classmethod
    def load(
        cls,
        config_file: str | Path | None = None,
        flag_overrides: Mapping | None = None,
        env: Mapping[str, str] | None = None,
    ) -> "RunConfig":
        env = os.environ if env is None else env
        merged = _merge(DEFAULTS, _env_overlay(env))
        if config_file:
            with open(config_file, "rb") as fh:
                merged = _merge(merged, tomllib.load(fh))
        if flag_overrides:
            merged = _merge(merged, flag_overrides)
        return cls(merged)

    def to_dict(self) -> dict:
        return copy.deepcopy(self.settings)

    def __getitem__(self, section: str) -> dict[str, Any]:
        return self.settings[section]

    def embedding_descriptor(self) -> BackendDescriptor:
        e = self.settings["embedding"]
        return BackendDescriptor(
            kind=e["kind"],
            dim=int(e["dim"]),
            endpoint=e["endpoint"] or None,
            normalize=bool(e["normalize"]),
            seed=int(e["seed"]),
        )

    def controller_config(self) -> ControllerConfig:
        c = self.settings["controller"]
        nprobe = int(self.settings["index"]["nprobe"])
        return ControllerConfig(
            lambda_=float(c["lambda"]),
            max_steps=int(c["max_steps"]),
            budgets=tuple(int(b) for b in c["budgets"]),
            selection_method=c["method"],
            dedupe=bool(c["dedupe"]),
            nprobe=nprobe or None,
        )

    def backends(self) -> Backends:
        c = self.settings["controller"]
        return Backends(
            embedding=self.embedding_descriptor(),
            tagger_endpoint=c["tagger"] or None,
            reformulate_endpoint=c["reformulator"] or None,
            classify_endpoint=self.settings["reasoner"]["endpoint"] or None,
        )

    def reasoner_backend(self) -> ReasonerBackend:
        r = self.settings["reasoner"]
        return ReasonerBackend(
            kind=r["kind"],
            endpoint=r["endpoint"] or None,
            slope=float(r["slope"]),
            midpoint=float(r["midpoint"]),
        )
