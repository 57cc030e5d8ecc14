"""Deterministic synthetic corpora and datasets for tests and experiments.

Everything here is offline and seed-driven. The corpus is a set of
single-fact paragraphs over an invented vocabulary; articles either quote
a corpus fact verbatim (label 1) or assert a fabricated variant with
tokens the corpus never uses (label 0), so the hashed-embedding pipeline
has a real signal to find.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import NewsArticle, Paragraph, write_store

_SYLLABLES = [
    "ba", "re", "mo", "ka", "li", "zu", "ne", "to", "sa", "vi",
    "du", "pe", "go", "ra", "mi", "lo", "te", "na", "su", "ki",
]

_RELATIONS = ["contains", "borders", "produces", "hosts", "measures"]


def _word(rng: random.Random, syllables: int) -> str:
    return "".join(rng.choice(_SYLLABLES) for _ in range(syllables))


def synthetic_corpus(n_entities: int, seed: int = 0) -> list[Paragraph]:
    """One fact paragraph and one filler paragraph per invented entity."""
    rng = random.Random(seed)
    paragraphs = []
    for i in range(n_entities):
        entity = _word(rng, 3)
        relation = _RELATIONS[i % len(_RELATIONS)]
        value = _word(rng, 2)
        fact = f"the {entity} site {relation} {value} deposits."
        filler = f"surveys of the {entity} region began in {1900 + i % 90}."
        paragraphs.append(Paragraph(doc_id=f"page{i:04d}", para_id=0, title=entity, text=fact))
        paragraphs.append(Paragraph(doc_id=f"page{i:04d}", para_id=1, title=entity, text=filler))
    return paragraphs


def synthetic_dataset(corpus: list[Paragraph], n_articles: int, seed: int = 0) -> list[NewsArticle]:
    """Labeled articles over the corpus: verbatim facts vs fabricated ones.

    The middle sentence carries the claim; the surrounding sentences echo
    its tokens so greedy gap-sentence selection lands on it (round one
    ranks purely by unigram overlap with the rest of the article).
    """
    rng = random.Random(seed)
    facts = [p for p in corpus if p.para_id == 0]
    articles = []
    for i in range(n_articles):
        fact = facts[rng.randrange(len(facts))]
        entity = fact.title
        relation = fact.text.split()[3]
        if i % 2 == 0:
            body = (
                f"surveyors toured the {entity} site deposits. "
                f"{fact.text} "
                f"analysts noted it {relation} those."
            )
            label = 1
        else:
            fake_value = _word(rng, 4)
            fake_claim = f"the {entity} site reportedly yielded {fake_value} {_word(rng, 4)}."
            body = (
                f"skeptics questioned the {entity} site figures. "
                f"{fake_claim} "
                f"the report said it reportedly yielded {fake_value}."
            )
            label = 0
        articles.append(NewsArticle(id=f"a{i:04d}", text=body, label=label))
    return articles


@dataclass(frozen=True)
class TwoHopFixture:
    """A corpus where the answer is only reachable through a bridge fact.

    The claim overlaps the bridge paragraph; the target paragraph only
    scores above the threshold against the reformulated (claim + bridge)
    query. Budgets of 1 force one paragraph per step.
    """

    paragraphs: list[Paragraph]
    claim_text: str
    lam: float
    bridge_key: tuple[str, int]
    target_key: tuple[str, int]


def two_hop_fixture() -> TwoHopFixture:
    claim = "falcon grove mineral harbor"
    bridge = "falcon grove mineral harbor quartz lantern meadow spruce"
    target = "falcon grove mineral harbor quartz lantern meadow spruce anvil"
    distractors = [
        "copper forge valley stone",
        "river barge cotton mill",
        "cedar summit glacier trail",
        "amber lighthouse dune coast",
    ]
    paragraphs = [
        Paragraph(doc_id="bridge", para_id=0, title="bridge", text=bridge),
        Paragraph(doc_id="target", para_id=0, title="target", text=target),
    ]
    for i, text in enumerate(distractors):
        paragraphs.append(Paragraph(doc_id=f"noise{i}", para_id=0, title=f"noise{i}", text=text))
    return TwoHopFixture(
        paragraphs=paragraphs,
        claim_text=claim,
        lam=0.78,
        bridge_key=("bridge", 0),
        target_key=("target", 0),
    )


def write_fixture_store(paragraphs: list[Paragraph], path: str | Path) -> Path:
    path = Path(path)
    write_store(path, paragraphs)
    return path


def write_fixture_dataset(articles: list[NewsArticle], path: str | Path) -> Path:
    import json

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for a in articles:
            fh.write(json.dumps({"id": a.id, "text": a.text, "label": a.label, "lang": a.lang}) + "\n")
    return path
