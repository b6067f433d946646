"""Feature matrix assembly and min-max normalization.

The model-building matrix has 16 columns: the 12 audio features in
canonical order, then popularity_continuity, genre_class, title_topic
and lyrics_topic.  The raw weeks-on-chart count can be appended as a
17th column for the metadata baseline.  Genre and topic codes stay
plain numeric columns (no one-hot).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DataError, ParameterError
from .ingest import AUDIO_FEATURES, GENRES, SongRecord

ENGINEERED_COLUMNS: tuple[str, ...] = (
    "popularity_continuity",
    "genre_class",
    "title_topic",
    "lyrics_topic",
)
FULL_FEATURE_COLUMNS: tuple[str, ...] = AUDIO_FEATURES + ENGINEERED_COLUMNS
WEEKS_COLUMN = "weeks_on_chart"

_GENRE_CODE = {name: i + 1 for i, name in enumerate(GENRES)}


@dataclass(frozen=True)
class FeatureMatrix:
    """Named numeric matrix with an aligned 0/1 label vector."""

    column_names: tuple[str, ...]
    values: np.ndarray  # (n, d) float64
    labels: np.ndarray  # (n,) int64
    ids: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        if values.ndim != 2 or values.shape != (len(self.ids), len(self.column_names)):
            raise ConsistencyError(
                f"matrix shape {values.shape} does not match "
                f"{len(self.ids)} ids x {len(self.column_names)} columns"
            )
        if labels.shape != (values.shape[0],):
            raise ConsistencyError("labels are not aligned with the matrix rows")
        if not np.isfinite(values).all():
            raise ConsistencyError("feature matrix contains non-finite cells")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.column_names.index(name)]

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        """Column subset, in the order given."""
        missing = [n for n in names if n not in self.column_names]
        if missing:
            raise ConsistencyError(f"unknown columns: {missing}")
        idx = [self.column_names.index(n) for n in names]
        return FeatureMatrix(tuple(names), self.values[:, idx].copy(), self.labels.copy(), self.ids)

    def take(self, indices: Sequence[int] | np.ndarray) -> "FeatureMatrix":
        """Row subset, in the order given."""
        idx = np.asarray(indices, dtype=np.int64)
        return FeatureMatrix(
            self.column_names,
            self.values[idx].copy(),
            self.labels[idx].copy(),
            tuple(self.ids[i] for i in idx),
        )


def popularity_continuity(weeks_on_chart: int) -> int:
    """Bin total chart weeks into the ordinal 0-3 code.

    >50 -> 3, [20, 50] -> 2, [10, 20) -> 1, <10 -> 0.  The prose intervals
    overlap at 20; here 20 belongs to the middle bin.
    """
    if weeks_on_chart < 0:
        raise ParameterError(f"weeks_on_chart must be >= 0, got {weeks_on_chart}")
    if weeks_on_chart > 50:
        return 3
    if weeks_on_chart >= 20:
        return 2
    if weeks_on_chart >= 10:
        return 1
    return 0


def genre_class(broad_genre: str) -> int:
    """Genre code 1..6 for country, edm, pop, r&b, rock, rap."""
    try:
        return _GENRE_CODE[broad_genre]
    except KeyError:
        raise ParameterError(f"unknown genre {broad_genre!r}; expected one of {GENRES}") from None


def assemble(
    records: Sequence[SongRecord],
    title_topics: Sequence[int],
    lyrics_topics: Sequence[int],
    include_weeks: bool = False,
) -> FeatureMatrix:
    """Build the model matrix from labeled records and per-song topic codes.

    ``title_topics`` / ``lyrics_topics`` align positionally with
    ``records``.  ``include_weeks`` appends raw weeks_on_chart as a final
    extra column for the metadata baseline.
    """
    if len(title_topics) != len(records) or len(lyrics_topics) != len(records):
        raise ConsistencyError(
            f"topic assignments ({len(title_topics)} titles, {len(lyrics_topics)} lyrics) "
            f"do not cover the {len(records)} records"
        )
    columns = FULL_FEATURE_COLUMNS + ((WEEKS_COLUMN,) if include_weeks else ())
    values = np.empty((len(records), len(columns)), dtype=np.float64)
    labels = np.empty(len(records), dtype=np.int64)
    ids = []
    for i, rec in enumerate(records):
        if rec.label is None:
            raise ConsistencyError(f"record {rec.key} has no label; run labeling first")
        if title_topics[i] is None or lyrics_topics[i] is None:
            raise ConsistencyError(f"record {rec.key} is missing a topic assignment")
        row = list(rec.audio.as_tuple())
        if any(v is None for v in row):
            raise ConsistencyError(f"record {rec.key} has missing audio; run clean first")
        row += [
            popularity_continuity(rec.weeks_on_chart),
            genre_class(rec.broad_genre),
            int(title_topics[i]),
            int(lyrics_topics[i]),
        ]
        if include_weeks:
            row.append(rec.weeks_on_chart)
        values[i] = row
        labels[i] = rec.label
        ids.append("|".join(rec.key))
    return FeatureMatrix(columns, values, labels, tuple(ids))


@dataclass(frozen=True)
class MinMaxParams:
    column_names: tuple[str, ...]
    mins: np.ndarray
    maxs: np.ndarray


def fit_minmax(train: FeatureMatrix) -> MinMaxParams:
    """Per-column (min, max) measured on the training split."""
    if train.n_rows == 0:
        raise DataError("cannot fit min-max parameters on an empty matrix")
    return MinMaxParams(
        column_names=train.column_names,
        mins=train.values.min(axis=0),
        maxs=train.values.max(axis=0),
    )


def apply_minmax(params: MinMaxParams, matrix: FeatureMatrix) -> FeatureMatrix:
    """Rescale to [0, 1]: (x - min) / (max - min), constant columns to 0, out-of-range clipped."""
    if matrix.column_names != params.column_names:
        raise ConsistencyError("min-max parameters were fit on different columns")
    span = params.maxs - params.mins
    safe_span = np.where(span > 0, span, 1.0)
    scaled = (matrix.values - params.mins) / safe_span
    scaled = np.where(span > 0, scaled, 0.0)
    scaled = np.clip(scaled, 0.0, 1.0)
    return FeatureMatrix(matrix.column_names, scaled, matrix.labels.copy(), matrix.ids)


def save_minmax(params: MinMaxParams, path: str | Path) -> None:
    doc = {
        "columns": {
            name: {"min": float(params.mins[i]), "max": float(params.maxs[i])}
            for i, name in enumerate(params.column_names)
        }
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_minmax(path: str | Path) -> MinMaxParams:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    names = tuple(doc["columns"])
    return MinMaxParams(
        column_names=names,
        mins=np.array([doc["columns"][n]["min"] for n in names]),
        maxs=np.array([doc["columns"][n]["max"] for n in names]),
    )


def matrix_to_csv(matrix: FeatureMatrix, path: str | Path) -> None:
    """Persist as CSV with header = column_names + label."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(matrix.column_names) + ["label"])
        for i in range(matrix.n_rows):
            writer.writerow([repr(float(v)) for v in matrix.values[i]] + [int(matrix.labels[i])])


def matrix_from_csv(path: str | Path) -> FeatureMatrix:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[-1] != "label":
            raise ConsistencyError(f"{path} is not a feature matrix CSV")
        names = tuple(header[:-1])
        rows, labels = [], []
        for row in reader:
            rows.append([float(v) for v in row[:-1]])
            labels.append(int(row[-1]))
    values = np.array(rows, dtype=np.float64).reshape(len(rows), len(names))
    ids = tuple(f"row{i}" for i in range(len(rows)))
    return FeatureMatrix(names, values, np.array(labels, dtype=np.int64), ids)
