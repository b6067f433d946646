"""SMOTE oversampling of the minority class.

Each synthetic row interpolates a minority base row toward one of its
k nearest minority neighbours:  s = x + delta * (x_nn - x)  with delta
uniform in [0, 1).  Base rows are cycled round-robin in row order; the
neighbour choice and delta come from one seeded PCG64 stream, so the
result is fully reproducible.  Every synthetic row's provenance
(base index, neighbour index, delta) is returned for auditing.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._rng import generator
from .errors import DataError, ParameterError
from .features import FeatureMatrix

#: integer-coded columns eligible for optional rounding after interpolation
CODED_COLUMNS: tuple[str, ...] = (
    "popularity_continuity",
    "genre_class",
    "title_topic",
    "lyrics_topic",
    "key",
    "mode",
    "time_signature",
)


@dataclass(frozen=True)
class SmoteConfig:
    k_neighbors: int = 5
    target_count: int | None = None  # None: match the majority class
    seed: int = 0
    round_coded_columns: bool = False


@dataclass(frozen=True)
class SmoteResult:
    matrix: FeatureMatrix
    #: one (base_row, neighbour_row, delta) triple per synthetic row,
    #: indices into the input matrix
    provenance: tuple[tuple[int, int, float], ...] = field(default=())


def smote_oversample(train: FeatureMatrix, cfg: SmoteConfig) -> SmoteResult:
    """Append synthetic minority rows until the minority count reaches the target.

    Original rows are passed through untouched and in order.  With
    normalized inputs the synthetic rows stay in [0, 1] (each coordinate
    is clamped to the base/neighbour envelope so floating-point rounding
    cannot escape the segment).
    """
    if cfg.k_neighbors < 1:
        raise ParameterError(f"k_neighbors must be >= 1, got {cfg.k_neighbors}")

    counts = np.bincount(train.labels, minlength=2)
    minority_label = int(np.argmin(counts))
    majority_label = 1 - minority_label
    n_min = int(counts[minority_label])
    if n_min < 2:
        raise DataError(f"SMOTE needs at least 2 minority rows to interpolate, found {n_min}")

    target = cfg.target_count if cfg.target_count is not None else int(counts[majority_label])
    if target < n_min:
        raise ParameterError(f"target_count {target} is below the minority count {n_min}")

    k = cfg.k_neighbors
    if k > n_min - 1:
        warnings.warn(
            f"k_neighbors={k} exceeds the {n_min - 1} available minority neighbours; using {n_min - 1}",
            stacklevel=2,
        )
        k = n_min - 1

    minority_rows = np.nonzero(train.labels == minority_label)[0]
    x_min = train.values[minority_rows]

    # exact brute-force neighbour lists among minority rows (self excluded);
    # stable argsort breaks distance ties toward the lower row index
    sq = (x_min**2).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x_min @ x_min.T)
    np.fill_diagonal(d2, np.inf)
    neighbour_lists = np.argsort(d2, axis=1, kind="stable")[:, :k]

    rng = generator(cfg.seed)
    n_synth = target - n_min
    synth = np.empty((n_synth, train.n_cols), dtype=np.float64)
    provenance = []
    for i in range(n_synth):
        base_pos = i % n_min
        nn_pos = int(neighbour_lists[base_pos, rng.integers(k)])
        delta = float(rng.random())
        x, x_nn = x_min[base_pos], x_min[nn_pos]
        row = x + delta * (x_nn - x)
        synth[i] = np.clip(row, np.minimum(x, x_nn), np.maximum(x, x_nn))
        provenance.append((int(minority_rows[base_pos]), int(minority_rows[nn_pos]), delta))

    if cfg.round_coded_columns and n_synth:
        for j, name in enumerate(train.column_names):
            if name in CODED_COLUMNS:
                codes = np.unique(train.values[:, j])
                snapped = np.abs(synth[:, [j]] - codes[None, :]).argmin(axis=1)
                synth[:, j] = codes[snapped]

    values = np.vstack([train.values, synth])
    labels = np.concatenate([train.labels, np.full(n_synth, minority_label, dtype=np.int64)])
    ids = train.ids + tuple(f"synthetic{i}" for i in range(n_synth))
    return SmoteResult(
        matrix=FeatureMatrix(train.column_names, values, labels, ids),
        provenance=tuple(provenance),
    )


def write_provenance_csv(result: SmoteResult, path: str | Path) -> None:
    """Audit dump: one (base index, neighbour index, delta) line per synthetic row."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["base_index", "neighbour_index", "delta"])
        for base, nn, delta in result.provenance:
            writer.writerow([base, nn, repr(delta)])
