"""Command-line interface.

Subcommands: ingest, index, summarize, retrieve, verify, evaluate,
experiment. Exit codes are stable across subcommands: 0 success,
1 verification-level failure, 2 usage or environment error. Every JSON
output embeds the merged run configuration for provenance.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import controller, index as index_mod
from .config import RunConfig
from .corpus import NewsArticle, ingest_wiki, load_dataset, split
from .experiments import load_experiment_config, run_experiment
from .pipeline import Pipeline, evaluate
from .reasoner import verdict_to_dict
from .summarize import Claim, extract_claim, select_gap_sentences

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _print_json(doc: dict, path: str | None = None) -> None:
    text = json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _overrides(args: argparse.Namespace) -> dict:
    """Map recognized CLI flags onto config sections."""
    out: dict[str, dict] = {}

    def put(section: str, key: str, value) -> None:
        if value is not None:
            out.setdefault(section, {})[key] = value

    put("controller", "lambda", getattr(args, "lam", None))
    put("controller", "max_steps", getattr(args, "max_steps", None))
    put("controller", "method", getattr(args, "method", None))
    budget = getattr(args, "budget", None)
    if budget:
        put("controller", "budgets", [int(b) for b in budget.split(",")])
    put("summarizer", "msr", getattr(args, "msr", None))
    put("summarizer", "backend", getattr(args, "backend", None))
    put("corpus", "granularity", getattr(args, "granularity", None))
    put("embedding", "kind", getattr(args, "embed_kind", None))
    put("embedding", "dim", getattr(args, "dim", None))
    put("embedding", "seed", getattr(args, "seed", None))
    put("embedding", "endpoint", getattr(args, "embed_endpoint", None))
    put("index", "nprobe", getattr(args, "nprobe", None))
    put("eval", "jobs", getattr(args, "jobs", None))
    return out


def _load_index(args: argparse.Namespace, config: RunConfig):
    index_dir = getattr(args, "index", None) or config["index"]["dir"]
    if not index_dir or not (Path(index_dir) / index_mod.META_FILE).exists():
        raise UsageError(f"index not found: {index_dir or '(unset)'} (run `muser index` first)")
    store = getattr(args, "store", None) or config["corpus"]["store"] or None
    return index_mod.load_index(index_dir, store)


def _read_article(args: argparse.Namespace) -> NewsArticle:
    path = Path(args.input)
    if not path.exists():
        raise UsageError(f"input file not found: {path}")
    text = path.read_text(encoding="utf-8").strip()
    if not text:
        raise UsageError(f"empty input: {path}")
    return NewsArticle(id=path.stem, text=text)


def cmd_ingest(args: argparse.Namespace, config: RunConfig) -> int:
    try:
        report = ingest_wiki(args.dump_dir, args.store,
                             granularity=config["corpus"]["granularity"])
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from exc
    _print_json(
        {
            "stored": report.stored,
            "pages": report.pages,
            "skipped_lines": report.skipped_lines,
            "warnings": report.warnings,
            "store": str(args.store),
            "run_config": config.to_dict(),
        }
    )
    return EXIT_OK


def cmd_index(args: argparse.Namespace, config: RunConfig) -> int:
    store = args.store or config["corpus"]["store"]
    if not store or not Path(store).exists():
        raise UsageError(f"paragraph store not found: {store or '(unset)'}")
    backend = config.embedding_descriptor()
    built = index_mod.build_exact(store, backend)
    result: index_mod.ExactIndex | index_mod.AnnIndex = built
    if args.ann:
        nlist = args.nlist or int(config["index"]["nlist"]) or index_mod.default_nlist(len(built))
        seed = int(config["index"]["seed"])
        result = index_mod.build_ann(built, nlist=nlist, seed=seed)
    index_mod.save_index(result, args.out_dir, store, backend)
    _print_json(
        {
            "count": len(built),
            "dim": built.dim,
            "ann": bool(args.ann),
            "out_dir": str(args.out_dir),
            "run_config": config.to_dict(),
        }
    )
    return EXIT_OK


def cmd_summarize(args: argparse.Namespace, config: RunConfig) -> int:
    article = _read_article(args)
    msr = float(config["summarizer"]["msr"])
    selection = select_gap_sentences(article, msr)
    flags: list[str] = []
    backend_url = config["summarizer"]["backend"]
    backend = None
    if backend_url:
        from .pipeline import http_abstractive_backend

        backend = http_abstractive_backend(backend_url)
    claim = extract_claim(article, msr, backend, flags)
    _print_json(
        {
            "claim": claim.text,
            "selected_indices": list(selection.selected),
            "scores": list(selection.scores),
            "flags": flags,
            "run_config": config.to_dict(),
        },
        getattr(args, "out", None),
    )
    return EXIT_OK


def cmd_retrieve(args: argparse.Namespace, config: RunConfig) -> int:
    if not args.claim.strip():
        raise UsageError("empty claim")
    idx = _load_index(args, config)
    claim = Claim(text=args.claim, source_id="cli")
    trace = controller.run(claim, idx, config.controller_config(), config.backends())
    print(controller.trace_json(trace, run_config=config.to_dict()))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    if not args.claim and not args.input:
        raise UsageError("verify needs --claim or --input")
    idx = _load_index(args, config)
    pipeline = Pipeline.from_config(config, idx)
    if args.claim:
        if not args.claim.strip():
            raise UsageError("empty claim")
        verdict = pipeline.verify_claim(Claim(text=args.claim, source_id="cli"))
    else:
        verdict = pipeline.verify_article(_read_article(args))
    doc = verdict_to_dict(verdict)
    doc["trace"] = controller.trace_to_dict(verdict.trace)
    doc["run_config"] = config.to_dict()
    _print_json(doc, args.out)
    if args.trace_out:
        Path(args.trace_out).write_text(
            controller.trace_json(verdict.trace, run_config=config.to_dict()) + "\n",
            encoding="utf-8",
        )
    return EXIT_OK


def _load_articles(args: argparse.Namespace, config: RunConfig) -> list[NewsArticle]:
    path = Path(args.dataset)
    if not path.exists():
        raise UsageError(f"dataset not found: {path}")
    articles = load_dataset(path, args.format)
    which = getattr(args, "split", "all")
    if which != "all":
        parts = split(articles, seed=int(config["eval"]["seed"]))
        wanted = set(parts.train_ids if which == "train" else parts.test_ids)
        articles = [a for a in articles if a.id in wanted]
    return articles


def cmd_evaluate(args: argparse.Namespace, config: RunConfig) -> int:
    articles = _load_articles(args, config)
    idx = _load_index(args, config)
    pipeline = Pipeline.from_config(config, idx)
    report, rows = evaluate(pipeline, articles, jobs=int(config["eval"]["jobs"]))
    _print_json(
        {
            "metrics": report.to_dict(),
            "row": report.format_row(),
            "n": len(rows),
            "run_config": config.to_dict(),
        },
        getattr(args, "out", None),
    )
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace, config: RunConfig) -> int:
    exp = load_experiment_config(args.exp_config)
    if exp.fixed:
        config = RunConfig(config.settings)
        config.settings = _merge_fixed(config.settings, exp.fixed)
    dataset = Path(exp.dataset)
    if not dataset.is_absolute():
        dataset = Path(args.exp_config).parent / dataset
    if not dataset.exists():
        raise UsageError(f"dataset not found: {dataset}")
    articles = load_dataset(dataset, exp.format)
    idx = _load_index(args, config)
    pipeline = Pipeline.from_config(config, idx)
    rows = run_experiment(exp, pipeline, articles, args.out_dir,
                          jobs=int(config["eval"]["jobs"]), dataset_name=dataset.stem)
    failed = [r for r in rows if r.get("error")]
    for r in failed:
        print(f"sweep point {r['sweep_value']} failed: {r['error']}", file=sys.stderr)
    print(f"wrote {Path(args.out_dir) / 'results.csv'} ({len(rows)} rows)")
    return EXIT_FAILURE if failed else EXIT_OK


def _merge_fixed(settings: dict, fixed: dict) -> dict:
    from .config import _merge

    return _merge(settings, fixed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="muser", description=__doc__)
    parser.add_argument("--config", help="run configuration TOML file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest a WikiExtractor dump into a paragraph store")
    p.add_argument("--dump-dir", required=True)
    p.add_argument("--store", required=True, help="output paragraphs.jsonl path")
    p.add_argument("--granularity", choices=["paragraph", "sentence"])
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("index", help="embed the store and build the search index")
    p.add_argument("--store")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--ann", action="store_true", help="also build the IVF index")
    p.add_argument("--nlist", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--embed-kind", choices=["hashed", "remote"])
    p.add_argument("--embed-endpoint")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("summarize", help="extract the check-worthy claim from an article")
    p.add_argument("--input", required=True)
    p.add_argument("--msr", type=float)
    p.add_argument("--backend", help="abstractive generation endpoint")
    p.add_argument("--out")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("retrieve", help="run multi-step retrieval for a claim")
    p.add_argument("--claim", required=True)
    p.add_argument("--index", help="index directory")
    p.add_argument("--store")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--budget", help="comma-separated per-step top-k, e.g. 30,30,30")
    p.add_argument("--method", choices=["threshold", "tagger"])
    p.add_argument("--nprobe", type=int)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("verify", help="verify an article or raw claim")
    p.add_argument("--input", help="article text file")
    p.add_argument("--claim", help="raw claim text (skips summarization)")
    p.add_argument("--index")
    p.add_argument("--store")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--budget")
    p.add_argument("--method", choices=["threshold", "tagger"])
    p.add_argument("--msr", type=float)
    p.add_argument("--nprobe", type=int)
    p.add_argument("--out", help="write verdict JSON here instead of stdout")
    p.add_argument("--trace-out", help="also write the trace JSON here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("evaluate", help="run the pipeline over a labeled dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--format", choices=["jsonl", "fakenewsnet_csv"], default="jsonl")
    p.add_argument("--index")
    p.add_argument("--store")
    p.add_argument("--split", choices=["all", "train", "test"], default="all")
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--budget")
    p.add_argument("--method", choices=["threshold", "tagger"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("experiment", help="run a sweep experiment from a TOML config")
    p.add_argument("--exp-config", required=True, help="experiment TOML")
    p.add_argument("--index")
    p.add_argument("--store")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig.load(args.config, flag_overrides=_overrides(args))
        return args.func(args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
