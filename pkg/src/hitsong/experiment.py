"""End-to-end pipeline and the feature-set ablation experiment.

Pipeline order (leak-free): clean -> topic models -> feature assembly ->
80:20 split -> min-max fit on train -> normalize both -> SMOTE the
training split -> optional forward selection -> fit -> evaluate.  Each
(model x feature set) ablation cell runs that cell's columns through the
same seeded stages, so a single run seed reproduces every report byte
for byte.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from ._rng import sub_seed
from .classifiers import DEFAULT_HYPERPARAMETERS, MODEL_KINDS, ModelSpec, fit_model
from .errors import ConfigError, DataError, HitSongError
from .evaluation import EvalReport, accuracy, auc, confusion, kfold, roc_curve, split, write_roc_csv
from .features import (
    FULL_FEATURE_COLUMNS,
    WEEKS_COLUMN,
    FeatureMatrix,
    apply_minmax,
    assemble,
    fit_minmax,
)
from .featsel import SelectionTrace, forward_select, selection_markdown
from .ingest import (
    AUDIO_FEATURES,
    SongRecord,
    aggregate_songs,
    clean,
    label_records,
    parse_dataset,
    read_clean_csv,
    removal_reason,
    write_clean_csv,
)
from .lda import TopicModel, assign_topics, fit_lda, load_topic_model, save_topic_model, top_words
from .smote import SmoteConfig, smote_oversample
from .textprep import load_stopwords, tokenize_corpus

FEATURE_SETS = ("AUDIO", "META_AUDIO", "NFE_AUDIO", "ALL")

FEATURE_SET_COLUMNS: dict[str, tuple[str, ...]] = {
    "AUDIO": AUDIO_FEATURES,
    "META_AUDIO": AUDIO_FEATURES + (WEEKS_COLUMN, "genre_class"),
    "NFE_AUDIO": AUDIO_FEATURES + ("popularity_continuity", "genre_class", "title_topic"),
    "ALL": FULL_FEATURE_COLUMNS,
}

FEATURE_SET_LABELS = {
    "AUDIO": "audio",
    "META_AUDIO": "metadata+audio",
    "NFE_AUDIO": "NFE+audio",
    "ALL": "NFE+audio+lyrics",
}

CLEANED_FILENAME = "cleaned.csv"
TITLE_MODEL_FILENAME = "title_topics.json"
LYRICS_MODEL_FILENAME = "lyrics_topics.json"


@dataclass
class ExperimentConfig:
    """Everything a run needs; defaults reproduce the tuned configuration."""

    input_path: str | None = None
    out_dir: str = "runs"
    seed: int = 42
    workers: int = 1

    models: tuple[str, ...] = MODEL_KINDS
    feature_sets: tuple[str, ...] = FEATURE_SETS
    hyperparameters: dict[str, dict] = field(default_factory=dict)

    ratio: float = 0.8
    cv_folds: int = 5
    stratified: bool = True
    smote_k: int = 5
    smote_round_coded: bool = False
    smote_before_cv: bool = False
    selection: bool = False
    selection_objective: str = "accuracy"

    title_topics: int = 10
    lyrics_topics: int = 20
    lda_alpha: float | None = None  # None -> 50/K
    lda_beta: float = 0.01
    lda_iterations: int = 1000

    stopwords_path: str | None = None
    column_map: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.models = tuple(self.models)
        self.feature_sets = tuple(self.feature_sets)
        bad = set(self.models) - set(MODEL_KINDS)
        if bad:
            raise ConfigError(f"unknown models: {sorted(bad)}")
        bad = set(self.feature_sets) - set(FEATURE_SETS)
        if bad:
            raise ConfigError(f"unknown feature sets: {sorted(bad)}")
        if not 0.0 < self.ratio < 1.0:
            raise ConfigError(f"ratio must be in (0, 1), got {self.ratio}")
        if self.cv_folds < 2:
            raise ConfigError(f"cv_folds must be >= 2, got {self.cv_folds}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        for kind in self.hyperparameters:
            if kind not in MODEL_KINDS:
                raise ConfigError(f"hyperparameters given for unknown model {kind!r}")

    def spec_for(self, kind: str, seed: int) -> ModelSpec:
        return ModelSpec(kind=kind, hyperparameters=self.hyperparameters.get(kind, {}), seed=seed)

    def to_dict(self) -> dict:
        doc = dataclasses.asdict(self)
        doc["models"] = list(self.models)
        doc["feature_sets"] = list(self.feature_sets)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)


_INI_SCHEMA: dict[str, dict[str, tuple[str, type]]] = {
    # section -> key -> (config attribute, type)
    "run": {
        "input": ("input_path", str),
        "out": ("out_dir", str),
        "seed": ("seed", int),
        "workers": ("workers", int),
    },
    "pipeline": {
        "ratio": ("ratio", float),
        "cv_folds": ("cv_folds", int),
        "stratified": ("stratified", bool),
        "smote_k": ("smote_k", int),
        "smote_round_coded": ("smote_round_coded", bool),
        "smote_before_cv": ("smote_before_cv", bool),
        "selection": ("selection", bool),
        "selection_objective": ("selection_objective", str),
    },
    "lda": {
        "title_topics": ("title_topics", int),
        "lyrics_topics": ("lyrics_topics", int),
        "alpha": ("lda_alpha", float),
        "beta": ("lda_beta", float),
        "iterations": ("lda_iterations", int),
    },
    "textprep": {
        "stopwords": ("stopwords_path", str),
    },
}

_HYPERPARAMETER_TYPES: dict[str, dict[str, type]] = {
    "knn": {"k": int},
    "nb": {"default_probability": float},
    "rf": {"n_trees": int, "criterion": str, "m_try": int},
    "lr": {"laplace_scale": float, "max_iter": int, "tol": float},
    "mlp": {"hidden_layers": int, "neurons": int, "max_iter": int, "learning_rate": float},
}


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an INI config file (or a manifest.json) into an ExperimentConfig."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    if path.suffix == ".json":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if "config" not in doc:
            raise ConfigError(f"{path} is not a run manifest (no 'config' key)")
        return ExperimentConfig.from_dict(doc["config"])

    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    kwargs: dict = {}
    hyper: dict[str, dict] = {}
    for section in parser.sections():
        if section in _INI_SCHEMA:
            for key, raw in parser.items(section):
                if key not in _INI_SCHEMA[section]:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
                attr, typ = _INI_SCHEMA[section][key]
                kwargs[attr] = _convert(section, key, raw, typ)
        elif section == "models":
            kwargs["models"] = _parse_list(parser.get(section, "list", fallback=""))
            extra = set(parser.options(section)) - {"list"}
            if extra:
                raise ConfigError(f"unknown keys in [models]: {sorted(extra)}")
        elif section == "features":
            kwargs["feature_sets"] = _parse_list(parser.get(section, "sets", fallback=""))
            extra = set(parser.options(section)) - {"sets"}
            if extra:
                raise ConfigError(f"unknown keys in [features]: {sorted(extra)}")
        elif section == "columns":
            kwargs["column_map"] = dict(parser.items(section))
        elif section in _HYPERPARAMETER_TYPES:
            types = _HYPERPARAMETER_TYPES[section]
            params = {}
            for key, raw in parser.items(section):
                if key not in types:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
                params[key] = _convert(section, key, raw, types[key])
            hyper[section] = params
        else:
            raise ConfigError(f"unknown config section [{section}]")
    if hyper:
        kwargs["hyperparameters"] = hyper
    return ExperimentConfig(**kwargs)


def _convert(section: str, key: str, raw: str, typ: type):
    try:
        if typ is bool:
            lowered = raw.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {typ.__name__}") from exc


def _parse_list(raw: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in raw.split(",") if item.strip())


# ---------------------------------------------------------------------------
# pipeline stages


def run_prepare(config: ExperimentConfig) -> dict:
    """Parse, aggregate, clean and label the raw CSV; write cleaned.csv + stats."""
    if not config.input_path:
        raise ConfigError("prepare needs an input CSV (set [run] input or --input)")
    if not Path(config.input_path).exists():
        raise DataError(f"input CSV not found: {config.input_path}")
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    rows = parse_dataset(config.input_path, config.column_map)
    ok_rows = [r for r in rows if r.ok]
    malformed = Counter(p for r in rows if not r.ok for p in r.problems[:1])
    songs = aggregate_songs(rows)
    kept = label_records(clean(songs))
    removed = Counter(removal_reason(s) for s in songs)
    removed.pop(None, None)

    write_clean_csv(kept, out / CLEANED_FILENAME)
    hits = sum(r.label for r in kept)
    dates = [r.week_date for r in ok_rows]
    stats = {
        "input": str(config.input_path),
        "raw_rows": len(rows),
        "malformed_rows": len(rows) - len(ok_rows),
        "malformed_reasons": dict(sorted(malformed.items())),
        "unique_songs": len(songs),
        "removed": dict(sorted(removed.items())),
        "retained": len(kept),
        "hits": hits,
        "non_hits": len(kept) - hits,
        "date_range": [min(dates).isoformat(), max(dates).isoformat()] if dates else None,
    }
    with open(out / "prepare_stats.json", "w", encoding="utf-8") as fh:
        json.dump(stats, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return stats


def _require_cleaned(config: ExperimentConfig) -> list[SongRecord]:
    path = Path(config.out_dir) / CLEANED_FILENAME
    if not path.exists():
        run_prepare(config)
    return read_clean_csv(path)


def run_topics(config: ExperimentConfig) -> tuple[TopicModel, TopicModel]:
    """Fit the title (K=10) and lyrics (K=20) topic models on the cleaned corpus."""
    records = _require_cleaned(config)
    out = Path(config.out_dir)
    stopwords = load_stopwords(config.stopwords_path)
    title_docs = tokenize_corpus([r.title for r in records], stopwords)
    lyrics_docs = tokenize_corpus([r.lyrics for r in records], stopwords)

    common = dict(alpha=config.lda_alpha, beta=config.lda_beta, iterations=config.lda_iterations)
    title_model = fit_lda(title_docs, config.title_topics, seed=sub_seed(config.seed, "lda/title"), **common)
    lyrics_model = fit_lda(lyrics_docs, config.lyrics_topics, seed=sub_seed(config.seed, "lda/lyrics"), **common)

    save_topic_model(title_model, out / TITLE_MODEL_FILENAME)
    save_topic_model(lyrics_model, out / LYRICS_MODEL_FILENAME)
    with open(out / "topic_top_words.md", "w", encoding="utf-8") as fh:
        for name, model in (("Title topics", title_model), ("Lyrics topics", lyrics_model)):
            fh.write(f"# {name} (K={model.k})\n\n")
            for topic, words in enumerate(top_words(model, topn=10)):
                listed = ", ".join(f"{w} ({c})" for w, c in words) or "(empty)"
                fh.write(f"- topic {topic}: {listed}\n")
            fh.write("\n")
    return title_model, lyrics_model


def _require_topics(config: ExperimentConfig) -> tuple[TopicModel, TopicModel]:
    out = Path(config.out_dir)
    title_path = out / TITLE_MODEL_FILENAME
    lyrics_path = out / LYRICS_MODEL_FILENAME
    if not (title_path.exists() and lyrics_path.exists()):
        return run_topics(config)
    return load_topic_model(title_path), load_topic_model(lyrics_path)


def build_matrix(config: ExperimentConfig) -> FeatureMatrix:
    """Cleaned records + fitted topic models -> the 16+weeks working matrix."""
    records = _require_cleaned(config)
    title_model, lyrics_model = _require_topics(config)
    if title_model.n_docs != len(records) or lyrics_model.n_docs != len(records):
        raise DataError(
            "topic models do not cover the cleaned dataset "
            f"({title_model.n_docs}/{lyrics_model.n_docs} docs vs {len(records)} records); re-run topics"
        )
    return assemble(records, assign_topics(title_model), assign_topics(lyrics_model), include_weeks=True)


# ---------------------------------------------------------------------------
# ablation cells


@dataclass
class CellResult:
    model_kind: str
    feature_set: str
    report: EvalReport | None
    roc: list[tuple[float, float, float]] = field(default_factory=list)
    trace: SelectionTrace | None = None
    columns_used: tuple[str, ...] = ()
    error: str | None = None

    @property
    def label(self) -> str:
        return f"{self.model_kind} ({FEATURE_SET_LABELS[self.feature_set]})"


def evaluate_cell(config: ExperimentConfig, matrix: FeatureMatrix, model_kind: str, feature_set: str) -> CellResult:
    """Run one (model, feature set) cell: split, normalize, SMOTE, optional selection, fit, evaluate."""
    columns = FEATURE_SET_COLUMNS[feature_set]
    seed = config.seed
    sub = matrix.select(columns)

    plan = split(sub.labels, ratio=config.ratio, stratified=config.stratified, seed=sub_seed(seed, "split"))
    train_raw = sub.take(plan.train_indices)
    test_raw = sub.take(plan.test_indices)
    params = fit_minmax(train_raw)
    train_n = apply_minmax(params, train_raw)
    test_n = apply_minmax(params, test_raw)

    balanced = smote_oversample(
        train_n,
        SmoteConfig(
            k_neighbors=config.smote_k,
            seed=sub_seed(seed, f"smote/{feature_set}"),
            round_coded_columns=config.smote_round_coded,
        ),
    ).matrix

    trace = None
    columns_used = columns
    if config.selection:
        trace = forward_select(
            config.spec_for(model_kind, sub_seed(seed, f"model/{model_kind}/{feature_set}/select")),
            balanced,
            candidates=columns,
            k=config.cv_folds,
            seed=sub_seed(seed, f"select/{model_kind}/{feature_set}"),
            objective=config.selection_objective,
        )
        if trace.selected:
            columns_used = trace.selected

    train_used = balanced.select(columns_used)
    test_used = test_n.select(columns_used)
    model = fit_model(config.spec_for(model_kind, sub_seed(seed, f"model/{model_kind}/{feature_set}")), train_used)
    scores = model.score(test_used.values)
    preds = (scores >= 0.5).astype(np.int64)
    roc = roc_curve(scores, test_used.labels)

    per_fold = _cv_metrics(config, model_kind, feature_set, train_n.select(columns_used), balanced.select(columns_used))

    report = EvalReport(
        accuracy=accuracy(preds, test_used.labels),
        auc=auc(scores, test_used.labels),
        confusion=confusion(preds, test_used.labels),
        per_fold=per_fold,
        roc_points=[(fpr, tpr) for _, fpr, tpr in roc],
    )
    return CellResult(model_kind, feature_set, report, roc, trace, columns_used)


def _cv_metrics(
    config: ExperimentConfig,
    model_kind: str,
    feature_set: str,
    train_n: FeatureMatrix,
    balanced: FeatureMatrix,
) -> list[tuple[float, float]]:
    """Mean-of-fold validation metrics.

    Default (leak-free): fold the un-oversampled training split and re-run
    SMOTE inside each fold's training portion.  With smote_before_cv the
    folds partition the already balanced set, matching pipelines that
    oversample once before cross-validating.
    """
    seed = config.seed
    source = balanced if config.smote_before_cv else train_n
    folds = kfold(
        np.arange(source.n_rows),
        source.labels,
        k=config.cv_folds,
        stratified=config.stratified,
        seed=sub_seed(seed, "folds"),
    )
    out = []
    for j, (train_idx, val_idx) in enumerate(folds):
        fold_train = source.take(train_idx)
        if not config.smote_before_cv:
            fold_train = smote_oversample(
                fold_train,
                SmoteConfig(
                    k_neighbors=config.smote_k,
                    seed=sub_seed(seed, f"smote/{feature_set}/fold{j}"),
                    round_coded_columns=config.smote_round_coded,
                ),
            ).matrix
        model = fit_model(
            config.spec_for(model_kind, sub_seed(seed, f"model/{model_kind}/{feature_set}/fold{j}")),
            fold_train,
        )
        val = source.take(val_idx)
        raw = model.score(val.values)
        out.append((accuracy((raw >= 0.5).astype(np.int64), val.labels), auc(raw, val.labels)))
    return out


def _cell_worker(args) -> CellResult:
    config, matrix, model_kind, feature_set = args
    try:
        return evaluate_cell(config, matrix, model_kind, feature_set)
    except HitSongError as exc:
        return CellResult(model_kind, feature_set, report=None, error=f"{type(exc).__name__}: {exc}")


def run_ablate(config: ExperimentConfig) -> list[CellResult]:
    """Evaluate every (model x feature set) cell and write the comparison reports."""
    started = time.time()
    matrix = build_matrix(config)
    out = Path(config.out_dir)
    reports_dir = out / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)

    cells = [(m, fs) for m in config.models for fs in config.feature_sets]
    jobs = [(config, matrix, m, fs) for m, fs in cells]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_cell_worker, jobs))
    else:
        results = [_cell_worker(job) for job in jobs]

    for res in results:
        stem = f"{res.model_kind}_{res.feature_set}"
        if res.report is None:
            with open(reports_dir / f"{stem}_error.txt", "w", encoding="utf-8") as fh:
                fh.write(res.error + "\n")
            continue
        doc = res.report.to_dict()
        doc["model"] = res.model_kind
        doc["feature_set"] = res.feature_set
        doc["columns_used"] = list(res.columns_used)
        if res.trace is not None:
            doc["selection"] = res.trace.to_dict()
        with open(reports_dir / f"{stem}.json", "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        write_roc_csv(res.roc, reports_dir / f"{stem}_roc.csv")

    _write_ablation_tables(results, out)
    _write_manifest(config, out, "ablate", time.time() - started)
    return results


def _fmt_pct(value: float) -> str:
    return f"{value * 100:.2f}%"


def _write_ablation_tables(results: list[CellResult], out: Path) -> None:
    header = ["", "5-fold CV Accuracy", "5-fold CV AUC", "Model Test Accuracy", "Model Test AUC"]
    md = ["| " + " | ".join(header) + " |", "|" + " --- |" * len(header)]
    csv_lines = ["model,feature_set,cv_accuracy,cv_auc,test_accuracy,test_auc"]
    for res in results:
        if res.report is None:
            md.append(f"| {res.label} | failed | failed | failed | failed |")
            csv_lines.append(f"{res.model_kind},{res.feature_set},,,,")
            continue
        rep = res.report
        md.append(
            f"| {res.label} | {_fmt_pct(rep.cv_accuracy)} | {rep.cv_auc:.3f} "
            f"| {_fmt_pct(rep.accuracy)} | {rep.auc:.3f} |"
        )
        csv_lines.append(
            f"{res.model_kind},{res.feature_set},{rep.cv_accuracy!r},{rep.cv_auc!r},{rep.accuracy!r},{rep.auc!r}"
        )
    with open(out / "ablation.md", "w", encoding="utf-8") as fh:
        fh.write("\n".join(md) + "\n")
    with open(out / "ablation.csv", "w", encoding="utf-8") as fh:
        fh.write("\n".join(csv_lines) + "\n")


def run_evaluate(config: ExperimentConfig, model_kind: str, feature_set: str) -> CellResult:
    """Run a single (model, feature set) cell and write its report files."""
    if model_kind not in MODEL_KINDS:
        raise ConfigError(f"unknown model {model_kind!r}; expected one of {MODEL_KINDS}")
    if feature_set not in FEATURE_SETS:
        raise ConfigError(f"unknown feature set {feature_set!r}; expected one of {FEATURE_SETS}")
    started = time.time()
    matrix = build_matrix(config)
    out = Path(config.out_dir)
    reports_dir = out / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)

    result = evaluate_cell(config, matrix, model_kind, feature_set)
    stem = f"{model_kind}_{feature_set}"
    doc = result.report.to_dict()
    doc["model"] = model_kind
    doc["feature_set"] = feature_set
    doc["columns_used"] = list(result.columns_used)
    if result.trace is not None:
        doc["selection"] = result.trace.to_dict()
    with open(reports_dir / f"{stem}.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_roc_csv(result.roc, reports_dir / f"{stem}_roc.csv")
    _write_manifest(config, out, "evaluate", time.time() - started, extra={"model": model_kind, "feature_set": feature_set})
    return result


def run_select(config: ExperimentConfig) -> list[SelectionTrace]:
    """Forward selection per model on the balanced ALL-features training set."""
    started = time.time()
    matrix = build_matrix(config)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    columns = FEATURE_SET_COLUMNS["ALL"]
    sub = matrix.select(columns)
    plan = split(sub.labels, ratio=config.ratio, stratified=config.stratified, seed=sub_seed(config.seed, "split"))
    train_raw = sub.take(plan.train_indices)
    params = fit_minmax(train_raw)
    train_n = apply_minmax(params, train_raw)
    balanced = smote_oversample(
        train_n,
        SmoteConfig(
            k_neighbors=config.smote_k,
            seed=sub_seed(config.seed, "smote/ALL"),
            round_coded_columns=config.smote_round_coded,
        ),
    ).matrix

    traces = []
    for kind in config.models:
        trace = forward_select(
            config.spec_for(kind, sub_seed(config.seed, f"model/{kind}/ALL/select")),
            balanced,
            candidates=columns,
            k=config.cv_folds,
            seed=sub_seed(config.seed, f"select/{kind}/ALL"),
            objective=config.selection_objective,
        )
        trace.save(out / f"selection_{kind}.json")
        traces.append(trace)

    with open(out / "selection.md", "w", encoding="utf-8") as fh:
        fh.write(selection_markdown(traces))
    _write_manifest(config, out, "select", time.time() - started)
    return traces


def _write_manifest(config: ExperimentConfig, out: Path, command: str, elapsed: float, extra: dict | None = None) -> None:
    dataset = None
    if config.input_path and Path(config.input_path).exists():
        digest = hashlib.sha256(Path(config.input_path).read_bytes()).hexdigest()
        dataset = {"path": str(config.input_path), "sha256": digest}
        cleaned = out / CLEANED_FILENAME
        if cleaned.exists():
            records = read_clean_csv(cleaned)
            hits = sum(r.label for r in records)
            dataset.update({"cleaned_rows": len(records), "hits": hits, "non_hits": len(records) - hits})
    manifest = {
        "command": command,
        "config": config.to_dict(),
        "seed": config.seed,
        "dataset": dataset,
        "versions": {"hitsong": __version__, "numpy": np.__version__},
        "elapsed_seconds": elapsed,
    }
    if extra:
        manifest.update(extra)
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_from_manifest(manifest_path: str | Path, out_dir: str | None = None):
    """Re-run the command recorded in a manifest; reports reproduce byte-identically."""
    with open(manifest_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    config = ExperimentConfig.from_dict(doc["config"])
    if out_dir is not None:
        config.out_dir = out_dir
    command = doc.get("command")
    if command == "ablate":
        return run_ablate(config)
    if command == "select":
        return run_select(config)
    if command == "evaluate":
        return run_evaluate(config, doc["model"], doc["feature_set"])
    raise ConfigError(f"manifest records unsupported command {command!r}")
