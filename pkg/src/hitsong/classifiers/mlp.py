"""Fully-connected sigmoid network trained by full-batch gradient descent.

Architecture d -> (neurons x hidden_layers) -> 1 with logistic-sigmoid
activations on every layer, mean binary cross-entropy loss (computed
from the output pre-activation for stability), and all parameters
initialized uniformly in [-0.5, 0.5] from the seed.
"""

from __future__ import annotations

import numpy as np

from .._rng import generator
from ..errors import ParameterError, TrainingError
from ..features import FeatureMatrix
from .base import TrainedClassifier
from .logistic import sigmoid

LOSS_IMPROVEMENT_FLOOR = 1e-10


def init_params(n_in: int, hidden_layers: int, neurons: int, seed: int):
    """Uniform[-0.5, 0.5] weights and biases, drawn layer by layer."""
    rng = generator(seed)
    sizes = [n_in] + [neurons] * hidden_layers + [1]
    weights, biases = [], []
    for a, b in zip(sizes[:-1], sizes[1:]):
        weights.append(rng.uniform(-0.5, 0.5, size=(a, b)))
        biases.append(rng.uniform(-0.5, 0.5, size=b))
    return weights, biases


def forward_logits(weights, biases, x: np.ndarray):
    """(output pre-activation, list of layer inputs) for backprop."""
    acts = [x]
    a = x
    for w, b in zip(weights[:-1], biases[:-1]):
        a = sigmoid(a @ w + b)
        acts.append(a)
    z = a @ weights[-1] + biases[-1]
    return z, acts


def loss_and_gradients(weights, biases, x: np.ndarray, y: np.ndarray):
    """Mean BCE loss and its gradients w.r.t. every weight matrix and bias vector."""
    n = x.shape[0]
    yy = y.reshape(-1, 1).astype(np.float64)
    z, acts = forward_logits(weights, biases, x)
    loss = float(np.mean(np.logaddexp(0.0, z) - yy * z))

    delta = (sigmoid(z) - yy) / n
    grad_w = [None] * len(weights)
    grad_b = [None] * len(biases)
    for layer in range(len(weights) - 1, -1, -1):
        grad_w[layer] = acts[layer].T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer > 0:
            upstream = delta @ weights[layer].T
            delta = upstream * acts[layer] * (1.0 - acts[layer])
    return loss, grad_w, grad_b


class MlpClassifier(TrainedClassifier):
    kind = "mlp"

    def __init__(self, column_names, weights, biases, n_iter: int = 0, final_loss: float = float("nan")):
        super().__init__(column_names)
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]
        self.n_iter = n_iter
        self.final_loss = final_loss

    def _score_rows(self, rows: np.ndarray) -> np.ndarray:
        z, _ = forward_logits(self.weights, self.biases, rows)
        return sigmoid(z).ravel()

    def state_dict(self) -> dict:
        return {
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
            "n_iter": self.n_iter,
            "final_loss": self.final_loss,
        }

    @classmethod
    def from_state(cls, column_names, state) -> "MlpClassifier":
        return cls(column_names, state["weights"], state["biases"], state["n_iter"], state["final_loss"])


def fit_mlp(
    train: FeatureMatrix,
    hidden_layers: int = 4,
    neurons: int = 22,
    max_iter: int = 4500,
    learning_rate: float = 0.1,
    seed: int = 0,
) -> MlpClassifier:
    """Train until max_iter or the loss change per iteration falls under 1e-10."""
    if hidden_layers < 1 or neurons < 1:
        raise ParameterError("hidden_layers and neurons must be >= 1")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")
    if learning_rate <= 0:
        raise ParameterError(f"learning_rate must be positive, got {learning_rate}")

    x, y = train.values, train.labels
    weights, biases = init_params(train.n_cols, hidden_layers, neurons, seed)
    prev_loss = None
    loss = float("nan")
    it = 0
    for it in range(1, max_iter + 1):
        loss, grad_w, grad_b = loss_and_gradients(weights, biases, x, y)
        if not np.isfinite(loss):
            raise TrainingError(
                f"MLP training diverged at iteration {it} (loss={loss}, "
                f"learning_rate={learning_rate}, hidden_layers={hidden_layers}, neurons={neurons})"
            )
        if prev_loss is not None and abs(prev_loss - loss) < LOSS_IMPROVEMENT_FLOOR:
            break
        prev_loss = loss
        for layer in range(len(weights)):
            weights[layer] -= learning_rate * grad_w[layer]
            biases[layer] -= learning_rate * grad_b[layer]
    return MlpClassifier(train.column_names, weights, biases, it, loss)
