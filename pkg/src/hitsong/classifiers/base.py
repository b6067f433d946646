"""Uniform classifier contract.

Every model fits on a FeatureMatrix and exposes ``score`` (hit
probability in [0, 1]) and ``predict`` (score >= 0.5).  Scoring accepts
a FeatureMatrix (column names are checked), a 2-D array (width is
checked) or a single 1-D row.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Union

import numpy as np

from ..errors import ConsistencyError
from ..features import FeatureMatrix

ScoreInput = Union[FeatureMatrix, np.ndarray, list]


class TrainedClassifier(ABC):
    kind: str = ""

    def __init__(self, column_names: tuple[str, ...]):
        self.column_names = tuple(column_names)

    def _as_matrix(self, x: ScoreInput) -> tuple[np.ndarray, bool]:
        """Coerce scoring input to (2-D array, was_single_row)."""
        if isinstance(x, FeatureMatrix):
            if x.column_names != self.column_names:
                raise ConsistencyError(
                    f"model was trained on columns {self.column_names}, got {x.column_names}"
                )
            return x.values, False
        arr = np.asarray(x, dtype=np.float64)
        single = arr.ndim == 1
        if single:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] != len(self.column_names):
            raise ConsistencyError(
                f"expected rows with {len(self.column_names)} features, got shape {arr.shape}"
            )
        return arr, single

    @abstractmethod
    def _score_rows(self, rows: np.ndarray) -> np.ndarray:
        """Hit probabilities for a validated (n, d) array."""

    def score(self, x: ScoreInput):
        """Hit probability in [0, 1]; scalar for a single row, vector otherwise."""
        rows, single = self._as_matrix(x)
        scores = np.clip(self._score_rows(rows), 0.0, 1.0)
        return float(scores[0]) if single else scores

    def predict(self, x: ScoreInput):
        """Class prediction: 1 when score >= 0.5."""
        out = self.score(x)
        if isinstance(out, float):
            return int(out >= 0.5)
        return (out >= 0.5).astype(np.int64)

    @abstractmethod
    def state_dict(self) -> dict:
        """JSON-serializable fitted state (sufficient to score bit-identically)."""

    @classmethod
    @abstractmethod
    def from_state(cls, column_names: tuple[str, ...], state: dict) -> "TrainedClassifier":
        """Rebuild a fitted model from ``state_dict`` output."""


def score(model: TrainedClassifier, x: ScoreInput):
    return model.score(x)


def predict(model: TrainedClassifier, x: ScoreInput):
    return model.predict(x)
