"""k-nearest-neighbour classifier (exact, brute-force Euclidean)."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..features import FeatureMatrix
from .base import TrainedClassifier


class KnnClassifier(TrainedClassifier):
    kind = "knn"

    def __init__(self, column_names, train_x: np.ndarray, train_y: np.ndarray, k: int):
        super().__init__(column_names)
        self.train_x = np.asarray(train_x, dtype=np.float64)
        self.train_y = np.asarray(train_y, dtype=np.int64)
        self.k = k

    def _score_rows(self, rows: np.ndarray) -> np.ndarray:
        # squared distances via the expansion; ties resolved toward the
        # lower training row index by the stable argsort
        sq_train = (self.train_x**2).sum(axis=1)
        d2 = (rows**2).sum(axis=1)[:, None] + sq_train[None, :] - 2.0 * (rows @ self.train_x.T)
        order = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
        return self.train_y[order].mean(axis=1)

    def state_dict(self) -> dict:
        return {"k": self.k, "train_x": self.train_x.tolist(), "train_y": self.train_y.tolist()}

    @classmethod
    def from_state(cls, column_names, state) -> "KnnClassifier":
        return cls(column_names, np.array(state["train_x"]), np.array(state["train_y"]), state["k"])


def fit_knn(train: FeatureMatrix, k: int = 1) -> KnnClassifier:
    """Memorize the training rows; score = fraction of the k nearest labeled hit."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if k > train.n_rows:
        raise ParameterError(f"k={k} exceeds the {train.n_rows} training rows")
    return KnnClassifier(train.column_names, train.values.copy(), train.labels.copy(), k)
