"""Random forest with Gini-impurity splits, grown from scratch.

Trees are grown on bootstrap samples until nodes are pure, smaller than
two rows, or admit no positive-gain split.  Split quality is compared in
exact integer arithmetic (the weighted Gini cost of a candidate split is
a rational in the class counts), so best-split selection and its tie
rules are reproducible to the bit: candidates are scanned in ascending
threshold order within a feature and ascending feature index across
features, and only a strictly better split replaces the incumbent.

The forest's score is the fraction of trees voting hit; a mixed leaf
votes its majority class, ties to non-hit.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..features import FeatureMatrix
from .base import TrainedClassifier


def gini_impurity(pos: int, neg: int) -> float:
    """1 - sum of squared class proportions for a node with the given counts."""
    n = pos + neg
    if n == 0:
        return 0.0
    return 1.0 - (pos * pos + neg * neg) / (n * n)


def _best_split_for_feature(values: np.ndarray, labels: np.ndarray):
    """Best split of one feature as (score_num, score_den, threshold) or None.

    The score is S = (pL^2+qL^2)/nL + (pR^2+qR^2)/nR, an exact rational;
    maximizing S minimizes the weighted Gini cost of the split.  Among
    exactly tied candidates the lowest threshold wins.
    """
    order = np.argsort(values, kind="stable")
    sv = values[order]
    sy = labels[order]
    boundaries = np.nonzero(sv[:-1] < sv[1:])[0]
    if boundaries.size == 0:
        return None

    n = values.shape[0]
    total_pos = int(sy.sum())
    cum_pos = np.cumsum(sy)
    n_left = boundaries + 1
    p_left = cum_pos[boundaries]
    q_left = n_left - p_left
    n_right = n - n_left
    p_right = total_pos - p_left
    q_right = n_right - p_right

    num = (p_left * p_left + q_left * q_left) * n_right + (p_right * p_right + q_right * q_right) * n_left
    den = n_left * n_right

    # float prescreen, then exact integer comparison among the near-ties
    proxy = num / den
    top = proxy.max()
    near = np.nonzero(proxy >= top - 1e-9 * max(1.0, abs(top)))[0]
    best = None
    for i in near:
        a, d = int(num[i]), int(den[i])
        if best is None or a * best[1] > best[0] * d:
            best = (a, d, i)
    a, d, i = best
    pos = int(boundaries[i])
    threshold = (sv[pos] + sv[pos + 1]) / 2.0
    return a, d, float(threshold)


class _Tree:
    __slots__ = ("feature", "threshold", "left", "right", "leaf_class")

    def __init__(self, feature, threshold, left, right, leaf_class):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.leaf_class = np.asarray(leaf_class, dtype=np.int8)

    def predict(self, rows: np.ndarray) -> np.ndarray:
        idx = np.zeros(rows.shape[0], dtype=np.int32)
        pending = np.nonzero(self.feature[idx] >= 0)[0]
        while pending.size:
            nid = idx[pending]
            go_left = rows[pending, self.feature[nid]] <= self.threshold[nid]
            idx[pending] = np.where(go_left, self.left[nid], self.right[nid])
            pending = pending[self.feature[idx[pending]] >= 0]
        return self.leaf_class[idx].astype(np.int64)

    def to_lists(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "leaf_class": self.leaf_class.tolist(),
        }

    @classmethod
    def from_lists(cls, doc: dict) -> "_Tree":
        return cls(doc["feature"], doc["threshold"], doc["left"], doc["right"], doc["leaf_class"])


def _grow_tree(x: np.ndarray, y: np.ndarray, m_try: int, rng: np.random.Generator) -> _Tree:
    n, d = x.shape
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    leaf_class: list[int] = []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        leaf_class.append(0)
        return len(feature) - 1

    root = new_node()
    stack: list[tuple[int, np.ndarray]] = [(root, np.arange(n))]
    while stack:
        nid, rows = stack.pop()
        ys = y[rows]
        pos = int(ys.sum())
        size = rows.shape[0]
        if size < 2 or pos == 0 or pos == size:
            leaf_class[nid] = 1 if pos > size - pos else 0
            continue

        feats = np.sort(rng.permutation(d)[:m_try])
        best = None  # (num, den, feat, threshold)
        for f in feats:
            found = _best_split_for_feature(x[rows, f], ys)
            if found is None:
                continue
            a, dd, thr = found
            if best is None or a * best[1] > best[0] * dd:
                best = (a, dd, int(f), thr)

        # a split is accepted only when its Gini gain is strictly positive:
        # S > (P^2 + Q^2) / n, compared exactly
        if best is None or best[0] * size <= (pos * pos + (size - pos) ** 2) * best[1]:
            leaf_class[nid] = 1 if pos > size - pos else 0
            continue

        _, _, f, thr = best
        mask = x[rows, f] <= thr
        feature[nid] = f
        threshold[nid] = thr
        left_id = new_node()
        right_id = new_node()
        left[nid] = left_id
        right[nid] = right_id
        # LIFO: push right first so the left child is grown first
        stack.append((right_id, rows[~mask]))
        stack.append((left_id, rows[mask]))

    return _Tree(feature, threshold, left, right, leaf_class)


class ForestClassifier(TrainedClassifier):
    kind = "rf"

    def __init__(self, column_names, trees: list[_Tree]):
        super().__init__(column_names)
        self.trees = trees

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def _score_rows(self, rows: np.ndarray) -> np.ndarray:
        votes = np.zeros(rows.shape[0], dtype=np.float64)
        for tree in self.trees:
            votes += tree.predict(rows)
        return votes / len(self.trees)

    def state_dict(self) -> dict:
        return {"trees": [t.to_lists() for t in self.trees]}

    @classmethod
    def from_state(cls, column_names, state) -> "ForestClassifier":
        return cls(column_names, [_Tree.from_lists(doc) for doc in state["trees"]])


def fit_rf(
    train: FeatureMatrix,
    n_trees: int = 600,
    criterion: str = "gini",
    m_try: int = 4,
    seed: int = 0,
    bootstrap: bool = True,
) -> ForestClassifier:
    """Grow ``n_trees`` Gini trees on bootstrap samples of the training rows.

    ``m_try`` features are drawn without replacement per node (clamped to
    the matrix width, so narrow feature subsets still train).  Each tree
    gets an independent child seed, so forests are reproducible and trees
    could be grown in parallel.
    """
    if criterion != "gini":
        raise ParameterError(f"only the 'gini' criterion is supported, got {criterion!r}")
    if n_trees < 1:
        raise ParameterError(f"n_trees must be >= 1, got {n_trees}")
    if m_try < 1:
        raise ParameterError(f"m_try must be >= 1, got {m_try}")
    m_eff = min(m_try, train.n_cols)

    x, y = train.values, train.labels
    n = train.n_rows
    trees = []
    for child in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.Generator(np.random.PCG64(child))
        if bootstrap:
            idx = rng.integers(0, n, size=n)
            trees.append(_grow_tree(x[idx], y[idx], m_eff, rng))
        else:
            trees.append(_grow_tree(x, y, m_eff, rng))
    return ForestClassifier(train.column_names, trees)
