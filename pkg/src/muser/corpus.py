"""Paragraph corpus store and benchmark dataset loading.

The store is a JSON-lines file (one paragraph per line) with a sidecar
``.idx`` file of fixed-width 8-byte little-endian byte offsets, so readers
can either stream the whole corpus or seek to a single paragraph.
"""

from __future__ import annotations

import csv
import json
import random
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .text import normalize, split_sentences



@dataclass(frozen=True)
class Paragraph:
    doc_id: str
    para_id: int
    title: str
    text: str

    @property
    def key(self) -> tuple[str, int]:
        return (self.doc_id, self.para_id)


@dataclass(frozen=True)
class NewsArticle:
    id: str
    text: str
    label: int | None = None
    lang: str = "en"

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError(f"article {self.id!r}: empty text")
        if self.label is not None and self.label not in (0, 1):
            raise ValueError(f"article {self.id!r}: label must be 0 or 1")


@dataclass(frozen=True)
class DatasetSplit:
    train_ids: list[str]
    test_ids: list[str]
    seed: int


@dataclass
class IngestReport:
    stored: int = 0
    pages: int = 0
    skipped_lines: int = 0
    warnings: list[str] = field(default_factory=list)


def split_paragraph_blocks(page_text: str, granularity: str = "paragraph") -> list[str]:
    """Segment a WikiExtractor page body into retrieval units.

    The default is the dump's natural structure (blank-line blocks);
    "sentence" stores one unit per sentence instead.
    """
    if granularity not in ("paragraph", "sentence"):
        raise ValueError(f"unknown granularity: {granularity!r}")
    blocks = []
    for raw in page_text.split("\n\n"):
        block = normalize(raw)
        if not block:
            continue
        if granularity == "sentence":
            blocks.extend(split_sentences(block))
        else:
            blocks.append(block)
    return blocks


def ingest_wiki(
    dump_dir: str | Path, out_store: str | Path, granularity: str = "paragraph"
) -> IngestReport:
    """Ingest a WikiExtractor dump (JSON object per line) into a store.

    Re-running replaces the store. Malformed JSON lines are skipped and
    reported; an unreadable dump directory raises.
    """
    dump_dir = Path(dump_dir)
    if not dump_dir.is_dir():
        raise FileNotFoundError(f"dump dir not found: {dump_dir}")

    report = IngestReport()

    def pages() -> Iterator[tuple[str, str, str]]:
        for path in sorted(p for p in dump_dir.rglob("*") if p.is_file()):
            with open(path, encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        obj = json.loads(line)
                        doc_id = str(obj["id"])
                        title = str(obj.get("title", ""))
                        body = str(obj.get("text", ""))
                    except (json.JSONDecodeError, KeyError, TypeError) as exc:
                        report.skipped_lines += 1
                        report.warnings.append(f"{path.name}:{lineno}: {exc}")
                        continue
                    yield doc_id, title, body

    def paragraphs() -> Iterator[Paragraph]:
        for doc_id, title, body in pages():
            report.pages += 1
            for para_id, block in enumerate(split_paragraph_blocks(body, granularity)):
                yield Paragraph(doc_id=doc_id, para_id=para_id, title=title, text=block)

    report.stored = write_store(out_store, paragraphs())
    return report


def write_store(path: str | Path, paragraphs: Iterable[Paragraph]) -> int:
    """Write paragraphs.jsonl plus the byte-offset sidecar; returns count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    seen: set[tuple[str, int]] = set()
    with open(path, "wb") as out, open(store_index_path(path), "wb") as idx:
        for p in paragraphs:
            if p.key in seen:
                raise ValueError(f"duplicate paragraph key {p.key}")
            seen.add(p.key)
            idx.write(struct.pack("<q", out.tell()))
            line = json.dumps(
                {"doc_id": p.doc_id, "para_id": p.para_id, "title": p.title, "text": p.text},
                ensure_ascii=False,
            )
            out.write(line.encode("utf-8") + b"\n")
            count += 1
    return count


def store_index_path(store_path: str | Path) -> Path:
    return Path(store_path).with_suffix(".idx")


def read_store(path: str | Path) -> list[Paragraph]:
    return list(iter_store(path))


def iter_store(path: str | Path) -> Iterator[Paragraph]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield _paragraph_from_json(line)


def store_size(path: str | Path) -> int:
    return store_index_path(path).stat().st_size // 8


def read_paragraph(path: str | Path, row: int) -> Paragraph:
    """Random access via the offset sidecar."""
    with open(store_index_path(path), "rb") as idx:
        idx.seek(row * 8)
        (offset,) = struct.unpack("<q", idx.read(8))
    with open(path, encoding="utf-8") as fh:
        fh.seek(offset)
        return _paragraph_from_json(fh.readline())


def _paragraph_from_json(line: str) -> Paragraph:
    obj = json.loads(line)
    return Paragraph(
        doc_id=str(obj["doc_id"]),
        para_id=int(obj["para_id"]),
        title=str(obj.get("title", "")),
        text=str(obj["text"]),
    )


_CSV_LABELS = {"real": 1, "true": 1, "fake": 0, "false": 0}


def load_dataset(path: str | Path, format: str) -> list[NewsArticle]:
    """Load a labeled news dataset in ``fakenewsnet_csv`` or ``jsonl`` form."""
    if format == "fakenewsnet_csv":
        return _load_fakenewsnet_csv(path)
    if format == "jsonl":
        return _load_jsonl(path)
    raise ValueError(f"unknown dataset format: {format!r}")


def _load_fakenewsnet_csv(path: str | Path) -> list[NewsArticle]:
    articles = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row_num, row in enumerate(csv.DictReader(fh), 1):
            raw = (row.get("label") or "").strip().lower()
            if raw not in _CSV_LABELS:
                raise ValueError(f"{path}: row {row_num}: unknown label {row.get('label')!r}")
            articles.append(
                NewsArticle(
                    id=str(row.get("id") or row_num),
                    text=row.get("news_text") or row.get("title") or "",
                    label=_CSV_LABELS[raw],
                )
            )
    return articles


def _load_jsonl(path: str | Path) -> list[NewsArticle]:
    articles = []
    with open(path, encoding="utf-8") as fh:
        for row_num, line in enumerate(fh, 1):
            if not line.strip():
                continue
            obj = json.loads(line)
            label = obj.get("label")
            if label is not None:
                if label not in (0, 1):
                    raise ValueError(f"{path}: row {row_num}: unknown label {label!r}")
                label = int(label)
            articles.append(
                NewsArticle(
                    id=str(obj["id"]),
                    text=str(obj["text"]),
                    label=label,
                    lang=str(obj.get("lang", "en")),
                )
            )
    return articles


def split(articles: list[NewsArticle], seed: int, train_frac: float = 0.75) -> DatasetSplit:
    """Deterministic stratified split; per-class train ratio within one article.

    Articles are grouped by label (None forms its own stratum), each group
    shuffled with the seed, and round(frac * n) taken for training.
    """
    if len(articles) < 4:
        raise ValueError(f"need at least 4 articles to split, got {len(articles)}")
    by_label: dict[int | None, list[str]] = {}
    for a in articles:
        by_label.setdefault(a.label, []).append(a.id)
    rng = random.Random(seed)
    train_ids: list[str] = []
    test_ids: list[str] = []
    for label in sorted(by_label, key=lambda v: (v is None, v)):
        ids = sorted(by_label[label])
        rng.shuffle(ids)
        n_train = round(train_frac * len(ids))
        train_ids.extend(ids[:n_train])
        test_ids.extend(ids[n_train:])
    return DatasetSplit(train_ids=train_ids, test_ids=test_ids, seed=seed)
