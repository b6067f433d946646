"""The five classifiers behind one fit/score/predict contract.

Hyperparameter defaults are the tuned values used throughout: kNN k=1,
naive Bayes density floor 0.031, random forest with 600 Gini trees and
4 features per split, logistic regression with Laplace scale 3 (L1
strength 1/3), and a 4x22 sigmoid MLP trained for up to 4500 iterations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ParameterError
from ..features import FeatureMatrix
from .base import TrainedClassifier, predict, score
from .forest import ForestClassifier, fit_rf, gini_impurity
from .knn import KnnClassifier, fit_knn
from .logistic import LogisticClassifier, fit_lr, log_loss, log_loss_gradient, sigmoid
from .mlp import MlpClassifier, fit_mlp, init_params, loss_and_gradients
from .naive_bayes import NaiveBayesClassifier, fit_nb

MODEL_KINDS = ("knn", "nb", "rf", "lr", "mlp")

#: tuned defaults per model kind
DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "knn": {"k": 1},
    "nb": {"default_probability": 0.031},
    "rf": {"n_trees": 600, "criterion": "gini", "m_try": 4},
    "lr": {"laplace_scale": 3.0, "max_iter": 100, "tol": 1e-8},
    "mlp": {"hidden_layers": 4, "neurons": 22, "max_iter": 4500, "learning_rate": 0.1},
}

_CLASS_BY_KIND = {
    "knn": KnnClassifier,
    "nb": NaiveBayesClassifier,
    "rf": ForestClassifier,
    "lr": LogisticClassifier,
    "mlp": MlpClassifier,
}


@dataclass(frozen=True)
class ModelSpec:
    """Which model to fit, with which hyperparameters and seed."""

    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ParameterError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")
        unknown = set(self.hyperparameters) - set(DEFAULT_HYPERPARAMETERS[self.kind])
        if unknown:
            raise ParameterError(f"unknown {self.kind} hyperparameters: {sorted(unknown)}")

    def resolved(self) -> dict:
        return {**DEFAULT_HYPERPARAMETERS[self.kind], **self.hyperparameters}


def fit_model(spec: ModelSpec, train: FeatureMatrix) -> TrainedClassifier:
    """Fit the model described by ``spec`` on ``train``."""
    params = spec.resolved()
    if spec.kind == "knn":
        return fit_knn(train, **params)
    if spec.kind == "nb":
        return fit_nb(train, **params)
    if spec.kind == "rf":
        return fit_rf(train, seed=spec.seed, **params)
    if spec.kind == "lr":
        return fit_lr(train, **params)
    return fit_mlp(train, seed=spec.seed, **params)


def save_model(model: TrainedClassifier, path: str | Path) -> None:
    doc = {"kind": model.kind, "column_names": list(model.column_names), "state": model.state_dict()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path: str | Path) -> TrainedClassifier:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    cls = _CLASS_BY_KIND[doc["kind"]]
    return cls.from_state(tuple(doc["column_names"]), doc["state"])


__all__ = [
    "MODEL_KINDS",
    "DEFAULT_HYPERPARAMETERS",
    "ModelSpec",
    "TrainedClassifier",
    "fit_model",
    "fit_knn",
    "fit_nb",
    "fit_rf",
    "fit_lr",
    "fit_mlp",
    "score",
    "predict",
    "save_model",
    "load_model",
    "gini_impurity",
    "sigmoid",
    "log_loss",
    "log_loss_gradient",
    "loss_and_gradients",
    "init_params",
    "KnnClassifier",
    "NaiveBayesClassifier",
    "ForestClassifier",
    "LogisticClassifier",
    "MlpClassifier",
]
