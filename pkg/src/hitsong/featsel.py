"""Greedy forward feature selection driven by cross-validated accuracy.

Starting from the empty set (scored as majority-class accuracy), each
round tries every remaining candidate, scores selected+candidate by mean
k-fold CV accuracy on folds fixed once per run, and accepts the best
candidate only if it strictly beats the incumbent score.  Ties go to the
earlier candidate in the given order (i.e. the lower column index).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ._rng import sub_seed
from .classifiers import ModelSpec, fit_model
from .errors import DataError, HitSongError, ParameterError
from .evaluation import accuracy, auc, kfold
from .features import FeatureMatrix

NOVEL_FEATURES = ("popularity_continuity", "genre_class", "title_topic")
LYRICS_FEATURE = "lyrics_topic"

OBJECTIVES = ("accuracy", "auc")


@dataclass(frozen=True)
class SelectionTrace:
    model_kind: str
    seed: int
    objective: str
    baseline: float
    steps: tuple[tuple[str, float], ...]  # (feature added, CV score after adding)

    @property
    def selected(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.steps)

    @property
    def final_score(self) -> float:
        return self.steps[-1][1] if self.steps else self.baseline

    def to_dict(self) -> dict:
        return {
            "model_kind": self.model_kind,
            "seed": self.seed,
            "objective": self.objective,
            "baseline": self.baseline,
            "steps": [{"feature": f, "score": s} for f, s in self.steps],
            "selected": list(self.selected),
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _cv_score(spec: ModelSpec, matrix: FeatureMatrix, columns, folds, objective: str) -> float:
    sub = matrix.select(columns)
    scores = []
    for train_idx, val_idx in folds:
        model = fit_model(spec, sub.take(train_idx))
        val = sub.take(val_idx)
        raw = model.score(val.values)
        if objective == "accuracy":
            scores.append(accuracy((raw >= 0.5).astype(np.int64), val.labels))
        else:
            scores.append(auc(raw, val.labels))
    return float(np.mean(scores))


def forward_select(
    model_spec: ModelSpec,
    train: FeatureMatrix,
    candidates: Sequence[str],
    k: int = 5,
    seed: int = 0,
    objective: str = "accuracy",
    min_improvement: float = 0.0,
) -> SelectionTrace:
    """Run forward selection for one model on (already balanced, normalized) data."""
    if not candidates:
        raise ParameterError("forward selection needs a non-empty candidate list")
    if objective not in OBJECTIVES:
        raise ParameterError(f"objective must be one of {OBJECTIVES}, got {objective!r}")

    folds = kfold(np.arange(train.n_rows), train.labels, k=k, stratified=True, seed=sub_seed(seed, "folds"))
    if objective == "auc" and any(len(np.unique(train.labels[val])) < 2 for _, val in folds):
        raise DataError("AUC-driven selection needs both classes in every fold")

    pos_rate = float(train.labels.mean())
    baseline = max(pos_rate, 1.0 - pos_rate) if objective == "accuracy" else 0.5

    selected: list[str] = []
    remaining = list(candidates)
    steps: list[tuple[str, float]] = []
    incumbent = baseline
    while remaining:
        best_name = None
        best_score = incumbent
        for name in remaining:
            try:
                score = _cv_score(model_spec, train, selected + [name], folds, objective)
            except HitSongError as exc:
                warnings.warn(f"candidate {name!r} skipped: training failed ({exc})", stacklevel=2)
                continue
            if score > best_score + min_improvement:
                best_score = score
                best_name = name
        if best_name is None:
            break
        selected.append(best_name)
        remaining.remove(best_name)
        steps.append((best_name, best_score))
        incumbent = best_score

    return SelectionTrace(
        model_kind=model_spec.kind,
        seed=seed,
        objective=objective,
        baseline=baseline,
        steps=tuple(steps),
    )


def format_feature(name: str) -> str:
    """Markdown label: novel features in italics, the lyrics feature in bold."""
    if name in NOVEL_FEATURES:
        return f"*{name}*"
    if name == LYRICS_FEATURE:
        return f"**{name}**"
    return name


def selection_markdown(traces: Sequence[SelectionTrace]) -> str:
    """Per-model table of accepted feature combinations."""
    lines = [
        "| Classifier | Accepted Feature Combination |",
        "| --- | --- |",
    ]
    for trace in traces:
        combo = ", ".join(format_feature(f) for f in trace.selected) or "(none)"
        lines.append(f"| {trace.model_kind} | {combo} |")
    lines.append("")
    lines.append("Novel features are marked in italics; the lyrics feature in bold.")
    return "\n".join(lines) + "\n"
