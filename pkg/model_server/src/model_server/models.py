"""Checkpoint-backed models for transformers mode.

Loading happens lazily at startup; any failure (missing package, missing
checkpoint, no network) marks the component unavailable and its endpoint
answers 503. Nothing here is needed for echo mode.
"""

from __future__ import annotations

import re


class ModelUnavailable(RuntimeError):
    pass


class HfEmbedder:
    """Mean over token embeddings of an encoder checkpoint."""

    def __init__(self, model_name: str, device: str = "cpu", max_tokens: int = 512):
        import torch
        from transformers import AutoModel, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModel.from_pretrained(model_name).to(device).eval()
        self.device = device
        self.max_tokens = max_tokens
        self.dim = int(self.model.config.hidden_size)

    def embed(self, texts: list[str]) -> list[list[float]]:
        torch = self._torch
        batch = self.tokenizer(
            texts, padding=True, truncation=True, max_length=self.max_tokens,
            return_tensors="pt",
        ).to(self.device)
        with torch.no_grad():
            hidden = self.model(**batch).last_hidden_state
        mask = batch["attention_mask"].unsqueeze(-1)
        summed = (hidden * mask).sum(dim=1)
        counts = mask.sum(dim=1).clamp(min=1)
        return (summed / counts).cpu().tolist()


class HfTagger:
    """Token-classification checkpoint decoded to whitespace-token BIO tags."""

    def __init__(self, model_name: str, device: str = "cpu", max_tokens: int = 512):
        import torch
        from transformers import AutoModelForTokenClassification, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModelForTokenClassification.from_pretrained(model_name).to(device).eval()
        self.device = device
        self.max_tokens = max_tokens

    def tag(self, claim: str, passage: str) -> dict:
        torch = self._torch
        words = [(m.group(), m.start(), m.end()) for m in re.finditer(r"\S+", passage)]
        tokens = [w for w, _, _ in words]
        encoded = self.tokenizer(
            claim, tokens, is_split_into_words=True, truncation=True,
            max_length=self.max_tokens, return_tensors="pt",
        ).to(self.device)
        with torch.no_grad():
            logits = self.model(**encoded).logits[0]
        labels = logits.argmax(dim=-1).tolist()
        id2label = self.model.config.id2label
        tags = ["O"] * len(tokens)
        for pos, word_id in enumerate(encoded.word_ids(0)):
            if word_id is None:
                continue
            raw = str(id2label.get(labels[pos], "O")).upper()
            tag = raw[0] if raw[:1] in ("B", "I") else "O"
            if tags[word_id] == "O":
                tags[word_id] = tag
        return {
            "tokens": tokens,
            "tags": tags,
            "offsets": [[s, e] for _, s, e in words],
        }


class HfClassifier:
    """Binary sequence classifier; probability of the positive class."""

    def __init__(self, model_name: str, device: str = "cpu", max_tokens: int = 512):
        import torch
        from transformers import AutoModelForSequenceClassification, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = (
            AutoModelForSequenceClassification.from_pretrained(model_name).to(device).eval()
        )
        self.device = device
        self.max_tokens = max_tokens

    def classify(self, claim: str, evidence: list[str]) -> float:
        torch = self._torch
        joined = " [SEP] ".join(evidence)
        encoded = self.tokenizer(
            claim, joined, truncation=True, max_length=self.max_tokens, return_tensors="pt"
        ).to(self.device)
        with torch.no_grad():
            logits = self.model(**encoded).logits[0]
        probs = torch.softmax(logits, dim=-1)
        return float(probs[-1])


class HfReformulator:
    """Seq2seq checkpoint generating the next-step query."""

    def __init__(self, model_name: str, device: str = "cpu", max_tokens: int = 512):
        import torch
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(model_name).to(device).eval()
        self.device = device
        self.max_tokens = max_tokens

    def reformulate(self, query: str, snippet: str) -> str:
        torch = self._torch
        encoded = self.tokenizer(
            f"{query} [SEP] {snippet}", truncation=True, max_length=self.max_tokens,
            return_tensors="pt",
        ).to(self.device)
        with torch.no_grad():
            out = self.model.generate(**encoded, max_new_tokens=64, do_sample=False)
        text = self.tokenizer.decode(out[0], skip_special_tokens=True).strip()
        return text or f"{query} [SEP] {snippet}"
