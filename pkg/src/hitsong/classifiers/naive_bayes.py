"""Gaussian naive Bayes with a per-feature density floor.

Each class-conditional feature density is a Gaussian fit by mean and
variance (variance floored at 1e-9).  Before taking logs, every
per-feature density value is floored at ``default_probability``, so a
feature that is wildly unlikely under both classes stops discriminating
instead of dominating the posterior.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError, ParameterError
from ..features import FeatureMatrix
from .base import TrainedClassifier

VARIANCE_FLOOR = 1e-9


class NaiveBayesClassifier(TrainedClassifier):
    kind = "nb"

    def __init__(self, column_names, means, variances, priors, density_floor: float):
        super().__init__(column_names)
        self.means = np.asarray(means, dtype=np.float64)  # (2, d)
        self.variances = np.asarray(variances, dtype=np.float64)  # (2, d)
        self.priors = np.asarray(priors, dtype=np.float64)  # (2,)
        self.density_floor = float(density_floor)

    def _log_likelihood(self, rows: np.ndarray, c: int) -> np.ndarray:
        var = self.variances[c]
        dens = np.exp(-((rows - self.means[c]) ** 2) / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)
        return np.log(np.maximum(dens, self.density_floor)).sum(axis=1)

    def _score_rows(self, rows: np.ndarray) -> np.ndarray:
        ll0 = np.log(self.priors[0]) + self._log_likelihood(rows, 0)
        ll1 = np.log(self.priors[1]) + self._log_likelihood(rows, 1)
        return 1.0 / (1.0 + np.exp(ll0 - ll1))

    def state_dict(self) -> dict:
        return {
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "priors": self.priors.tolist(),
            "density_floor": self.density_floor,
        }

    @classmethod
    def from_state(cls, column_names, state) -> "NaiveBayesClassifier":
        return cls(
            column_names,
            np.array(state["means"]),
            np.array(state["variances"]),
            np.array(state["priors"]),
            state["density_floor"],
        )


def fit_nb(train: FeatureMatrix, default_probability: float = 0.031) -> NaiveBayesClassifier:
    """Fit per-class Gaussians; ``default_probability`` floors every density value."""
    if default_probability <= 0:
        raise ParameterError(f"default_probability must be positive, got {default_probability}")
    y = train.labels
    if len(np.unique(y)) < 2:
        raise DataError("naive Bayes training data must contain both classes")
    means, variances, priors = [], [], []
    for c in (0, 1):
        rows = train.values[y == c]
        means.append(rows.mean(axis=0))
        variances.append(np.maximum(rows.var(axis=0), VARIANCE_FLOOR))
        priors.append(rows.shape[0] / train.n_rows)
    return NaiveBayesClassifier(train.column_names, means, variances, priors, default_probability)
