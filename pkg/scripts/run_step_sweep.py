#!/usr/bin/env python3
"""Retrieval-step sweep: how verdict quality moves with 1..4 steps."""

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
    parser.add_argument("--out-dir", default="out/steps")
    parser.add_argument("--steps", default="1,2,3,4")
    parser.add_argument("--budget", type=int, default=5)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    fixture = Path(args.fixture_dir)
    index = load_index(fixture / "index", fixture / "paragraphs.jsonl")
    backend = load_backend(fixture / "index")
    articles = load_dataset(fixture / "dataset.jsonl", "jsonl")
    steps = tuple(int(s) for s in args.steps.split(","))

    pipeline = Pipeline(
        index=index,
        backends=Backends(embedding=backend),
        controller_config=ControllerConfig(
            max_steps=max(steps), budgets=(args.budget,) * max(steps)
        ),
        reasoner=ReasonerBackend(midpoint=0.75),
    )
    exp = ExperimentConfig(
        name="retrieval steps", sweep_param="steps", sweep_values=steps,
        dataset=str(fixture / "dataset.jsonl"),
    )
    rows = run_experiment(exp, pipeline, articles, args.out_dir, jobs=args.jobs)
    for row in rows:
        print(f"steps={row['sweep_value']:>2}  F1-Ma={row['f1_macro']}  F1-Mi={row['f1_micro']}")
    print(f"results: {Path(args.out_dir) / 'results.csv'}")


if __name__ == "__main__":
    main()
