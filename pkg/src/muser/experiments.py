"""Sweep experiments over the pipeline: retrieval steps, threshold, budget.

Each sweep point re-runs the full pipeline on a labeled dataset and
contributes one CSV row; a line plot of macro/micro F1 against the sweep
value is written alongside. Failed points keep their row with empty
metric cells so a sweep never dies half way.
"""

from __future__ import annotations

import csv
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .controller import ControllerConfig
from .corpus import NewsArticle
from .pipeline import Pipeline, evaluate

CSV_COLUMNS = [
    "dataset", "sweep_param", "sweep_value",
    "f1_macro", "f1_micro", "f1_t", "p_t", "r_t", "f1_f", "p_f", "r_f",
    "wall_ms",
]

SWEEP_PARAMS = ("steps", "lambda", "budget")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    sweep_param: str
    sweep_values: tuple
    dataset: str
    format: str = "jsonl"
    seed: int = 0
    fixed: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.sweep_param not in SWEEP_PARAMS:
            raise ValueError(f"sweep axis must be one of {SWEEP_PARAMS}")
        if not self.sweep_values:
            raise ValueError("sweep values must be non-empty")


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    sweep = doc.get("sweep", {})
    axes = [k for k in SWEEP_PARAMS if k in sweep]
    if len(axes) != 1:
        raise ValueError(f"exactly one sweep axis required, found {axes or 'none'}")
    param = axes[0]
    values = sweep[param]
    if param == "budget":
        values = tuple(tuple(int(b) for b in v) for v in values)
    else:
        values = tuple(values)
    return ExperimentConfig(
        name=str(doc.get("name", Path(path).stem)),
        sweep_param=param,
        sweep_values=values,
        dataset=str(doc["dataset"]),
        format=str(doc.get("format", "jsonl")),
        seed=int(doc.get("seed", 0)),
        fixed=dict(doc.get("fixed", {})),
    )


def point_controller_config(base: ControllerConfig, param: str, value: Any) -> ControllerConfig:
    """Derive one sweep point's controller settings from the base config."""
    if param == "steps":
        steps = int(value)
        budgets = list(base.budgets)
        while len(budgets) < steps:
            budgets.append(budgets[-1])
        return replace(base, max_steps=steps, budgets=tuple(budgets))
    if param == "lambda":
        return replace(base, lambda_=float(value))
    if param == "budget":
        budgets = tuple(int(b) for b in value)
        return replace(base, budgets=budgets, max_steps=len(budgets))
    raise ValueError(f"unknown sweep param: {param!r}")


def _sweep_key(param: str, value: Any):
    if param == "budget":
        return (len(value), tuple(value))
    return (float(value),)


def _value_str(param: str, value: Any) -> str:
    if param == "budget":
        return ",".join(str(b) for b in value)
    return str(value)


def run_experiment(
    exp: ExperimentConfig,
    pipeline: Pipeline,
    articles: list[NewsArticle],
    out_dir: str | Path,
    jobs: int = 1,
    dataset_name: str | None = None,
) -> list[dict]:
    """Run every sweep point and write results.csv plus an SVG line plot."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset_name = dataset_name or Path(exp.dataset).stem

    def one_point(value) -> dict:
        row = {
            "dataset": dataset_name,
            "sweep_param": exp.sweep_param,
            "sweep_value": _value_str(exp.sweep_param, value),
        }
        start = time.perf_counter()
        try:
            cfg = point_controller_config(pipeline.controller_config, exp.sweep_param, value)
            point = replace(pipeline, controller_config=cfg)
            report, _ = evaluate(point, articles, jobs=1)
            row.update({k: f"{v:.6f}" for k, v in report.to_dict().items() if k != "confusion"})
        except Exception as exc:  # a failed point must not kill the sweep
            row.update({k: "" for k in CSV_COLUMNS[3:-1]})
            row["error"] = str(exc)
        row["wall_ms"] = str(int((time.perf_counter() - start) * 1000))
        return row

    values = sorted(exp.sweep_values, key=lambda v: _sweep_key(exp.sweep_param, v))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one_point, values))
    else:
        rows = [one_point(v) for v in values]

    write_results_csv(rows, out_dir / "results.csv")
    write_plot_svg(rows, exp, out_dir / "plot.svg")
    return rows


def write_results_csv(rows: list[dict], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)


def write_plot_svg(rows: list[dict], exp: ExperimentConfig, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plotted = [r for r in rows if r.get("f1_macro")]
    fig, ax = plt.subplots(figsize=(6, 4))
    if plotted:
        x = range(len(plotted))
        ax.plot(x, [float(r["f1_macro"]) for r in plotted], marker="o", label="F1-Macro")
        ax.plot(x, [float(r["f1_micro"]) for r in plotted], marker="s", label="F1-Micro")
        ax.set_xticks(list(x))
        ax.set_xticklabels([r["sweep_value"] for r in plotted])
    ax.set_xlabel(exp.sweep_param)
    ax.set_ylabel("F1")
    ax.set_title(exp.name)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
