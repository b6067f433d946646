"""Command-line entry points.

Subcommands: prepare, topics, ablate, select, evaluate.  Flags override
the config file.  Exit codes: 0 success, 2 config error, 3 data error,
4 run failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiment
from .errors import ConfigError, DataError, HitSongError, SchemaError
from .experiment import ExperimentConfig, load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUN = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hitsong",
        description="Hit-song prediction pipeline: prepare data, fit topic models, "
        "run feature-set ablations and forward selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("--config", help="INI config file (or a manifest.json to re-run)")
        p.add_argument("--input", help="raw chart CSV path")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="run seed")

    p = sub.add_parser("prepare", help="parse, aggregate, clean and label the raw CSV")
    add_common(p)

    p = sub.add_parser("topics", help="fit the title and lyrics topic models")
    add_common(p)

    p = sub.add_parser("ablate", help="run the (model x feature set) ablation grid")
    add_common(p)
    p.add_argument("--model", action="append", dest="models", metavar="KIND", help="restrict to this model (repeatable)")
    p.add_argument("--features", action="append", dest="feature_sets", metavar="SET", help="restrict to this feature set (repeatable)")
    p.add_argument("--workers", type=int, help="parallel cell workers")

    p = sub.add_parser("select", help="forward feature selection per model")
    add_common(p)
    p.add_argument("--model", action="append", dest="models", metavar="KIND", help="restrict to this model (repeatable)")

    p = sub.add_parser("evaluate", help="evaluate a single (model, feature set) cell")
    add_common(p)
    p.add_argument("--model", required=True, help="model kind (knn, nb, rf, lr, mlp)")
    p.add_argument("--features", required=True, help="feature set (AUDIO, META_AUDIO, NFE_AUDIO, ALL)")

    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    if args.input:
        config.input_path = args.input
    if args.out:
        config.out_dir = args.out
    if args.seed is not None:
        config.seed = args.seed
    if getattr(args, "workers", None):
        config.workers = args.workers
    models = getattr(args, "models", None)
    if models:
        config.models = tuple(models)
    feature_sets = getattr(args, "feature_sets", None)
    if feature_sets:
        config.feature_sets = tuple(feature_sets)
    # re-validate after overrides
    return ExperimentConfig.from_dict(config.to_dict())


def _cmd_prepare(config: ExperimentConfig) -> int:
    stats = experiment.run_prepare(config)
    print(f"raw rows: {stats['raw_rows']} ({stats['malformed_rows']} malformed)")
    print(f"unique songs: {stats['unique_songs']}")
    for reason, count in stats["removed"].items():
        print(f"removed ({reason}): {count}")
    print(f"retained: {stats['retained']} ({stats['hits']} hits, {stats['non_hits']} non-hits)")
    if stats["date_range"]:
        print(f"chart weeks observed: {stats['date_range'][0]} .. {stats['date_range'][1]}")
    print(f"cleaned dataset: {Path(config.out_dir) / experiment.CLEANED_FILENAME}")
    return EXIT_OK


def _cmd_topics(config: ExperimentConfig) -> int:
    title_model, lyrics_model = experiment.run_topics(config)
    out = Path(config.out_dir)
    print(f"title topic model: K={title_model.k} -> {out / experiment.TITLE_MODEL_FILENAME}")
    print(f"lyrics topic model: K={lyrics_model.k} -> {out / experiment.LYRICS_MODEL_FILENAME}")
    print(f"top words per topic: {out / 'topic_top_words.md'}")
    return EXIT_OK


def _cmd_ablate(config: ExperimentConfig) -> int:
    results = experiment.run_ablate(config)
    with open(Path(config.out_dir) / "ablation.md", encoding="utf-8") as fh:
        print(fh.read(), end="")
    failures = [r for r in results if r.report is None]
    for r in failures:
        print(f"cell {r.label} failed: {r.error}", file=sys.stderr)
    return EXIT_RUN if len(failures) == len(results) else EXIT_OK


def _cmd_select(config: ExperimentConfig) -> int:
    experiment.run_select(config)
    with open(Path(config.out_dir) / "selection.md", encoding="utf-8") as fh:
        print(fh.read(), end="")
    return EXIT_OK


def _cmd_evaluate(config: ExperimentConfig, model: str, feature_set: str) -> int:
    result = experiment.run_evaluate(config, model, feature_set)
    rep = result.report
    print(f"{result.label}: test accuracy {rep.accuracy * 100:.2f}%, test AUC {rep.auc:.3f}")
    print(f"CV accuracy {rep.cv_accuracy * 100:.2f}%, CV AUC {rep.cv_auc:.3f}")
    tp, fp, tn, fn = rep.confusion
    print(f"confusion: TP={tp} FP={fp} TN={tn} FN={fn}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "prepare":
            return _cmd_prepare(config)
        if args.command == "topics":
            return _cmd_topics(config)
        if args.command == "ablate":
            return _cmd_ablate(config)
        if args.command == "select":
            return _cmd_select(config)
        return _cmd_evaluate(config, args.model, args.features)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SchemaError, DataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except HitSongError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_RUN
    except Exception as exc:  # anything unanticipated still maps to a run failure
        print(f"run failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUN


if __name__ == "__main__":
    sys.exit(main())
