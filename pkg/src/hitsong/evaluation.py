"""Splits, cross-validation folds, and the accuracy/AUC/confusion metrics.

The 80:20 split and the 5-fold partition are stratified by default:
each class is shuffled by the seeded generator and dealt out so that
fold sizes differ by at most one row overall and per class.  AUC is the
rank-based (Mann-Whitney) statistic with ties counted half, which equals
the trapezoidal area under the ROC curve.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._rng import generator
from .errors import DataError, ParameterError


@dataclass(frozen=True)
class SplitPlan:
    train_indices: np.ndarray
    test_indices: np.ndarray
    ratio: float
    stratified: bool
    seed: int


@dataclass
class EvalReport:
    accuracy: float
    auc: float
    confusion: tuple[int, int, int, int]  # (TP, FP, TN, FN)
    per_fold: list[tuple[float, float]] = field(default_factory=list)  # (accuracy, auc)
    roc_points: list[tuple[float, float]] = field(default_factory=list)  # (fpr, tpr)

    @property
    def cv_accuracy(self) -> float:
        return float(np.mean([a for a, _ in self.per_fold])) if self.per_fold else float("nan")

    @property
    def cv_auc(self) -> float:
        return float(np.mean([a for _, a in self.per_fold])) if self.per_fold else float("nan")

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "auc": self.auc,
            "confusion": {k: v for k, v in zip(("tp", "fp", "tn", "fn"), self.confusion)},
            "per_fold": [{"accuracy": a, "auc": u} for a, u in self.per_fold],
            "cv_accuracy": self.cv_accuracy if self.per_fold else None,
            "cv_auc": self.cv_auc if self.per_fold else None,
            "roc_points": [{"fpr": f, "tpr": t} for f, t in self.roc_points],
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def split(labels: Sequence[int] | np.ndarray, ratio: float = 0.8, stratified: bool = True, seed: int = 0) -> SplitPlan:
    """Shuffled train/test split; per class, round(ratio * class size) rows go to train."""
    y = np.asarray(labels, dtype=np.int64)
    if y.shape[0] < 2:
        raise DataError("cannot split fewer than 2 rows")
    if not 0.0 < ratio < 1.0:
        raise ParameterError(f"ratio must be in (0, 1), got {ratio}")
    classes, counts = np.unique(y, return_counts=True)
    if classes.shape[0] < 2:
        raise DataError("cannot split single-class data")
    if counts.min() < 2:
        raise DataError("every class needs at least 2 rows to split")

    rng = generator(seed)
    train_parts, test_parts = [], []
    if stratified:
        for c in classes:
            idx = np.nonzero(y == c)[0]
            shuffled = idx[rng.permutation(idx.shape[0])]
            n_train = int(round(ratio * idx.shape[0]))
            train_parts.append(shuffled[:n_train])
            test_parts.append(shuffled[n_train:])
    else:
        shuffled = rng.permutation(y.shape[0])
        n_train = int(round(ratio * y.shape[0]))
        train_parts.append(shuffled[:n_train])
        test_parts.append(shuffled[n_train:])

    return SplitPlan(
        train_indices=np.sort(np.concatenate(train_parts)),
        test_indices=np.sort(np.concatenate(test_parts)),
        ratio=ratio,
        stratified=stratified,
        seed=seed,
    )


def kfold(
    indices: Sequence[int] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    k: int = 5,
    stratified: bool = True,
    seed: int = 0,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Partition ``indices`` into k folds; ``labels`` is the full label vector.

    Rows are dealt round-robin (class by class when stratified, with the
    dealing pointer carried across classes), so fold sizes differ by at
    most 1 overall and within each class.  Returns (train, validate)
    index pairs, validate = fold i.
    """
    idx = np.asarray(indices, dtype=np.int64)
    y = np.asarray(labels, dtype=np.int64)
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    if idx.shape[0] < k:
        raise DataError(f"cannot make {k} folds from {idx.shape[0]} rows")

    rng = generator(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    pointer = 0
    if stratified:
        for c in np.unique(y[idx]):
            members = idx[y[idx] == c]
            shuffled = members[rng.permutation(members.shape[0])]
            for value in shuffled:
                folds[pointer % k].append(int(value))
                pointer += 1
    else:
        shuffled = idx[rng.permutation(idx.shape[0])]
        for value in shuffled:
            folds[pointer % k].append(int(value))
            pointer += 1

    out = []
    for i in range(k):
        validate = np.sort(np.array(folds[i], dtype=np.int64))
        train = np.sort(np.concatenate([np.array(folds[j], dtype=np.int64) for j in range(k) if j != i]))
        out.append((train, validate))
    return out


def accuracy(predictions: Sequence[int] | np.ndarray, labels: Sequence[int] | np.ndarray) -> float:
    """Fraction of exact matches."""
    p = np.asarray(predictions)
    y = np.asarray(labels)
    if p.shape != y.shape or p.size == 0:
        raise ParameterError(f"predictions {p.shape} and labels {y.shape} must be equal-length and non-empty")
    return float(np.mean(p == y))


def auc(scores: Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray) -> float:
    """Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 * P(tie)."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if s.shape != y.shape:
        raise ParameterError("scores and labels must be equal-length")
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise DataError("AUC is undefined without both classes")
    ranks = _midranks(s)
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def _midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned their average rank."""
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(values.shape[0], dtype=np.float64)
    i = 0
    while i < values.shape[0]:
        j = i
        while j + 1 < values.shape[0] and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def confusion(predictions: Sequence[int] | np.ndarray, labels: Sequence[int] | np.ndarray) -> tuple[int, int, int, int]:
    """(TP, FP, TN, FN) with hit=1 as the positive class."""
    p = np.asarray(predictions, dtype=np.int64)
    y = np.asarray(labels, dtype=np.int64)
    if p.shape != y.shape:
        raise ParameterError("predictions and labels must be equal-length")
    tp = int(((p == 1) & (y == 1)).sum())
    fp = int(((p == 1) & (y == 0)).sum())
    tn = int(((p == 0) & (y == 0)).sum())
    fn = int(((p == 0) & (y == 1)).sum())
    return tp, fp, tn, fn


def roc_curve(scores: Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray) -> list[tuple[float, float, float]]:
    """(threshold, fpr, tpr) at every distinct score, descending, with the (0, 0) endpoint.

    A row is predicted positive when its score is >= the threshold, so the
    final point (at the minimum score) is (1, 1).
    """
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC curve is undefined without both classes")

    order = np.argsort(-s, kind="mergesort")
    points = [(float("inf"), 0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < s.shape[0]:
        thr = s[order[i]]
        while i < s.shape[0] and s[order[i]] == thr:
            if y[order[i]] == 1:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append((float(thr), fp / n_neg, tp / n_pos))
    return points


def write_roc_csv(points: list[tuple[float, float, float]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("threshold,fpr,tpr\n")
        for thr, fpr, tpr in points:
            fh.write(f"{thr!r},{fpr!r},{tpr!r}\n")
