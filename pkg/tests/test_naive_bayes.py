import math

import numpy as np
import pytest

from hitsong.classifiers import fit_nb, load_model, save_model
from hitsong.classifiers.naive_bayes import VARIANCE_FLOOR
from hitsong.errors import DataError, ParameterError
from hitsong.features import FeatureMatrix


def matrix(values, labels, names=None):
    values = np.asarray(values, dtype=float)
    names = names or tuple(f"f{i}" for i in range(values.shape[1]))
    return FeatureMatrix(names, values, np.asarray(labels), tuple(f"r{i}" for i in range(values.shape[0])))


def test_symmetric_midpoint_scores_half():
    model = fit_nb(matrix([[0.0], [1.0]], [0, 1]))
    assert model.score(np.array([0.5])) == pytest.approx(0.5, abs=1e-9)


def test_hand_evaluated_posterior_one_feature():
    # means 0 and 1, single samples so the variance floor applies; at x=0 the
    # class-0 density is the floored-variance Gaussian peak and the class-1
    # density collapses to the 0.031 floor
    model = fit_nb(matrix([[0.0], [1.0]], [0, 1]), default_probability=0.031)
    peak = 1.0 / math.sqrt(2.0 * math.pi * VARIANCE_FLOOR)
    expected = 0.031 / (peak + 0.031)
    assert model.score(np.array([0.0])) == pytest.approx(expected, rel=1e-12)
    assert model.score(np.array([0.0])) < 0.5


def test_density_floor_neutralizes_far_feature():
    # second feature is 100+ sigma from both class means: with the floor it
    # contributes identically to both classes, so scores match a model
    # trained without that feature
    rng = np.random.default_rng(0)
    x0 = rng.normal(0, 1, 30)
    x1 = rng.normal(5, 1, 30)
    noise = rng.normal(0, 0.01, 60)
    values = np.column_stack([np.concatenate([x0, x1]), noise])
    labels = np.array([0] * 30 + [1] * 30)
    both = fit_nb(matrix(values, labels))
    solo = fit_nb(matrix(values[:, :1], labels))
    query_far = np.array([1.0, 1000.0])
    assert both.score(query_far) == pytest.approx(solo.score(np.array([1.0])), rel=1e-12)


def test_feature_order_permutation_invariant():
    rng = np.random.default_rng(3)
    values = rng.random((40, 3))
    labels = (values[:, 0] > 0.5).astype(int)
    fm = matrix(values, labels, names=("a", "b", "c"))
    perm = fm.select(("c", "a", "b"))
    model = fit_nb(fm)
    model_p = fit_nb(perm)
    queries = rng.random((10, 3))
    permuted = queries[:, [2, 0, 1]]
    assert np.allclose(model.score(queries), model_p.score(permuted), atol=1e-12)


def test_single_class_fatal():
    with pytest.raises(DataError):
        fit_nb(matrix([[0.0], [1.0]], [1, 1]))


def test_floor_must_be_positive():
    with pytest.raises(ParameterError):
        fit_nb(matrix([[0.0], [1.0]], [0, 1]), default_probability=0.0)


def test_priors_follow_class_fractions():
    model = fit_nb(matrix([[0.0], [0.1], [0.2], [1.0]], [0, 0, 0, 1]))
    assert model.priors.tolist() == [0.75, 0.25]


def test_persistence_bit_identical(tmp_path):
    rng = np.random.default_rng(9)
    fm = matrix(rng.random((30, 4)), (rng.random(30) < 0.4).astype(int))
    model = fit_nb(fm)
    save_model(model, tmp_path / "nb.json")
    back = load_model(tmp_path / "nb.json")
    queries = rng.random((15, 4))
    assert np.array_equal(model.score(queries), back.score(queries))
