#!/usr/bin/env python3
"""Budget comparison: widened one-step retrieval vs the 3x30 multi-step setup."""

import argparse
from pathlib import Path

from muser.controller import Backends, ControllerConfig
from muser.corpus import load_dataset
from muser.experiments import ExperimentConfig, run_experiment
from muser.index import load_backend, load_index
from muser.pipeline import Pipeline
from muser.reasoner import ReasonerBackend


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixture-dir", default="data/fixture")
    parser.add_argument("--out-dir", default="out/budget")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    fixture = Path(args.fixture_dir)
    index = load_index(fixture / "index", fixture / "paragraphs.jsonl")
    backend = load_backend(fixture / "index")
    articles = load_dataset(fixture / "dataset.jsonl", "jsonl")

    pipeline = Pipeline(
        index=index,
        backends=Backends(embedding=backend),
        controller_config=ControllerConfig(max_steps=3, budgets=(30, 30, 30)),
        reasoner=ReasonerBackend(midpoint=0.75),
    )
    exp = ExperimentConfig(
        name="retrieval budget", sweep_param="budget",
        sweep_values=((30,), (60,), (90,), (30, 30, 30)),
        dataset=str(fixture / "dataset.jsonl"),
    )
    rows = run_experiment(exp, pipeline, articles, args.out_dir, jobs=args.jobs)
    for row in rows:
        print(f"budget={row['sweep_value']:>9}  F1-Ma={row['f1_macro']}  F1-Mi={row['f1_micro']}")
    print(f"results: {Path(args.out_dir) / 'results.csv'}")


if __name__ == "__main__":
    main()
