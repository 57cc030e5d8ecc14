#!/usr/bin/env python3
"""Generate a synthetic corpus, dataset, and built index for experiments."""

import argparse
from pathlib import Path

from muser.embedding import BackendDescriptor
from muser.fixtures import synthetic_corpus, synthetic_dataset, write_fixture_dataset, write_fixture_store
from muser.index import build_exact, save_index


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data/fixture")
    parser.add_argument("--entities", type=int, default=50)
    parser.add_argument("--articles", type=int, default=50)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus = synthetic_corpus(args.entities, seed=args.seed)
    store = write_fixture_store(corpus, out / "paragraphs.jsonl")
    dataset = write_fixture_dataset(
        synthetic_dataset(corpus, args.articles, seed=args.seed + 1), out / "dataset.jsonl"
    )
    backend = BackendDescriptor(kind="hashed", dim=args.dim, seed=args.seed)
    index = build_exact(store, backend)
    save_index(index, out / "index", store, backend)
    print(f"store:   {store} ({len(corpus)} paragraphs)")
    print(f"dataset: {dataset} ({args.articles} articles)")
    print(f"index:   {out / 'index'} (dim {args.dim})")


if __name__ == "__main__":
    main()
