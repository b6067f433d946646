"""Latent Dirichlet Allocation by collapsed Gibbs sampling.

One token at a time, the sampler removes the token from the count
tables and redraws its topic from

    p(z = k) ∝ (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)

then reinserts it.  After the final sweep the per-document topic
distribution is read off the counts:

    theta[d, k] = (n_dk + alpha) / (len_d + K*alpha)

The inner loop is JIT-compiled when numba is installed; the pure-Python
fallback consumes the same PCG64 stream, so results are bit-identical
either way.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ._rng import generator
from .errors import DataError, ParameterError
from .textprep import TokenDoc

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an optional accelerator
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000


def default_alpha(k: int) -> float:
    """Symmetric document-topic prior 50/K (Griffiths-Steyvers heuristic)."""
    return 50.0 / k


@dataclass(frozen=True)
class Vocabulary:
    words: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.words)})

    def __len__(self) -> int:
        return len(self.words)

    def index_of(self, word: str) -> int:
        return self._index[word]

    def __contains__(self, word: str) -> bool:
        return word in self._index


@dataclass
class TopicModel:
    """Fitted LDA state; immutable by convention once returned."""

    k: int
    alpha: float
    beta: float
    iterations: int
    seed: int
    vocabulary: Vocabulary
    topic_word_counts: np.ndarray  # (K, V) int64
    doc_topic_counts: np.ndarray  # (D, K) int64
    doc_lengths: np.ndarray  # (D,) int64
    theta: np.ndarray  # (D, K) float64

    @property
    def n_docs(self) -> int:
        return self.doc_topic_counts.shape[0]


def build_vocabulary(docs: Sequence[TokenDoc]) -> Vocabulary:
    """Index every distinct token, in first-occurrence order."""
    seen: dict[str, int] = {}
    for doc in docs:
        for tok in doc.tokens:
            if tok not in seen:
                seen[tok] = len(seen)
    if not seen:
        raise DataError("cannot build a vocabulary from an all-empty corpus")
    return Vocabulary(words=tuple(seen))


@njit(cache=True)
def _init_assignments(words, doc_of, z, n_dk, n_kw, n_k, rng):
    k = n_kw.shape[0]
    for i in range(words.shape[0]):
        t = int(rng.random() * k)
        if t >= k:
            t = k - 1
        z[i] = t
        n_dk[doc_of[i], t] += 1
        n_kw[t, words[i]] += 1
        n_k[t] += 1


@njit(cache=True)
def _gibbs_sweep(words, doc_of, z, n_dk, n_kw, n_k, alpha, beta, rng):
    k_topics = n_kw.shape[0]
    vbeta = n_kw.shape[1] * beta
    cum = np.empty(k_topics, np.float64)
    for i in range(words.shape[0]):
        w = words[i]
        d = doc_of[i]
        old = z[i]
        n_dk[d, old] -= 1
        n_kw[old, w] -= 1
        n_k[old] -= 1
        total = 0.0
        for k in range(k_topics):
            total += (n_dk[d, k] + alpha) * (n_kw[k, w] + beta) / (n_k[k] + vbeta)
            cum[k] = total
        u = rng.random() * total
        new = 0
        while new < k_topics - 1 and u >= cum[new]:
            new += 1
        z[i] = new
        n_dk[d, new] += 1
        n_kw[new, w] += 1
        n_k[new] += 1


def theta_from_counts(doc_topic_counts: np.ndarray, doc_lengths: np.ndarray, alpha: float) -> np.ndarray:
    k = doc_topic_counts.shape[1]
    return (doc_topic_counts + alpha) / (doc_lengths[:, None] + k * alpha)


def fit_lda(
    docs: Sequence[TokenDoc],
    k: int,
    *,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    sweep_callback: Callable[[int, np.ndarray, np.ndarray, np.ndarray], None] | None = None,
) -> TopicModel:
    """Fit a K-topic model on a tokenized corpus.

    Empty documents are carried through with uniform theta rows.  Count
    conservation is asserted after every sweep.  ``sweep_callback``
    (sweep index, doc_topic_counts, topic_word_counts, topic_counts) is
    invoked after each sweep; the arrays are live views and must not be
    mutated.
    """
    if k < 2:
        raise ParameterError(f"topic count must be >= 2, got {k}")
    if iterations < 1:
        raise ParameterError(f"iterations must be >= 1, got {iterations}")
    if alpha is None:
        alpha = default_alpha(k)
    if alpha <= 0 or beta <= 0:
        raise ParameterError("alpha and beta must be positive")

    vocab = build_vocabulary(docs)
    doc_lengths = np.array([len(d.tokens) for d in docs], dtype=np.int64)
    total = int(doc_lengths.sum())
    words = np.empty(total, dtype=np.int32)
    doc_of = np.empty(total, dtype=np.int32)
    pos = 0
    for d, doc in enumerate(docs):
        for tok in doc.tokens:
            words[pos] = vocab.index_of(tok)
            doc_of[pos] = d
            pos += 1

    n_docs = len(docs)
    z = np.empty(total, dtype=np.int32)
    n_dk = np.zeros((n_docs, k), dtype=np.int64)
    n_kw = np.zeros((k, len(vocab)), dtype=np.int64)
    n_k = np.zeros(k, dtype=np.int64)

    rng = generator(seed)
    _init_assignments(words, doc_of, z, n_dk, n_kw, n_k, rng)
    _check_counts(n_dk, n_kw, n_k, total)

    for sweep in range(iterations):
        _gibbs_sweep(words, doc_of, z, n_dk, n_kw, n_k, alpha, beta, rng)
        _check_counts(n_dk, n_kw, n_k, total)
        if sweep_callback is not None:
            sweep_callback(sweep, n_dk, n_kw, n_k)

    return TopicModel(
        k=k,
        alpha=float(alpha),
        beta=float(beta),
        iterations=iterations,
        seed=int(seed),
        vocabulary=vocab,
        topic_word_counts=n_kw,
        doc_topic_counts=n_dk,
        doc_lengths=doc_lengths,
        theta=theta_from_counts(n_dk, doc_lengths, alpha),
    )


def _check_counts(n_dk, n_kw, n_k, total):
    if n_dk.min() < 0 or n_kw.min() < 0 or n_k.min() < 0:
        raise AssertionError("negative topic count (exclude/reinsert bookkeeping broken)")
    if not (n_dk.sum() == n_kw.sum() == n_k.sum() == total):
        raise AssertionError("topic count tables lost tokens during a sweep")


def doc_topic(model: TopicModel, d: int) -> np.ndarray:
    """Topic distribution theta for document ``d``."""
    if not 0 <= d < model.n_docs:
        raise IndexError(f"document index {d} out of range [0, {model.n_docs})")
    return model.theta[d].copy()


def assign_topic(theta_row: Sequence[float] | np.ndarray) -> int:
    """Argmax topic; ties go to the lowest index."""
    row = np.asarray(theta_row, dtype=np.float64)
    if row.size == 0:
        raise ParameterError("cannot assign a topic from an empty probability vector")
    return int(np.argmax(row))


def assign_topics(model: TopicModel) -> np.ndarray:
    """Per-document argmax topic for the whole corpus."""
    return np.argmax(model.theta, axis=1).astype(np.int64)


def top_words(model: TopicModel, topn: int = 10) -> list[list[tuple[str, int]]]:
    """Per topic: up to ``topn`` (word, count) pairs, highest count first, ties by index."""
    out = []
    for k in range(model.k):
        counts = model.topic_word_counts[k]
        order = np.argsort(-counts, kind="stable")
        pairs = [
            (model.vocabulary.words[i], int(counts[i]))
            for i in order[:topn]
            if counts[i] > 0
        ]
        out.append(pairs)
    return out


def save_topic_model(model: TopicModel, path: str | Path) -> None:
    doc = {
        "k": model.k,
        "alpha": model.alpha,
        "beta": model.beta,
        "iterations": model.iterations,
        "seed": model.seed,
        "vocabulary": list(model.vocabulary.words),
        "topic_word_counts": model.topic_word_counts.tolist(),
        "doc_topic_counts": model.doc_topic_counts.tolist(),
        "doc_lengths": model.doc_lengths.tolist(),
        "theta": model.theta.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_topic_model(path: str | Path) -> TopicModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return TopicModel(
        k=doc["k"],
        alpha=doc["alpha"],
        beta=doc["beta"],
        iterations=doc["iterations"],
        seed=doc["seed"],
        vocabulary=Vocabulary(words=tuple(doc["vocabulary"])),
        topic_word_counts=np.array(doc["topic_word_counts"], dtype=np.int64),
        doc_topic_counts=np.array(doc["doc_topic_counts"], dtype=np.int64),
        doc_lengths=np.array(doc["doc_lengths"], dtype=np.int64),
        theta=np.array(doc["theta"], dtype=np.float64),
    )
