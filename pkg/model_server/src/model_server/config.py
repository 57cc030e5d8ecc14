from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    mode: str = "echo"  # "echo" or "transformers"
    dim: int = 256
    max_batch: int = 64
    max_text_tokens: int = 512
    device: str = "cpu"
    # checkpoint names, used only in transformers mode
    embedder_model: str = "bert-base-uncased"
    tagger_model: str = ""
    classifier_model: str = ""
    reformulator_model: str = ""

    def __post_init__(self) -> None:
        if self.mode not in ("echo", "transformers"):
            raise ValueError(f"unknown mode: {self.mode!r}")
        if self.dim < 1 or self.max_batch < 1:
            raise ValueError("dim and max_batch must be positive")
