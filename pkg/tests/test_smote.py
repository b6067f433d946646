import numpy as np
import pytest

from conftest import random_matrix
from hitsong.errors import DataError, ParameterError
from hitsong.features import FeatureMatrix
from hitsong.smote import CODED_COLUMNS, SmoteConfig, SmoteResult, smote_oversample, write_provenance_csv


def imbalanced(n=40, d=4, seed=0, minority=8):
    rng = np.random.default_rng(seed)
    values = rng.random((n, d))
    labels = np.zeros(n, dtype=np.int64)
    labels[rng.choice(n, minority, replace=False)] = 1
    return FeatureMatrix(tuple(f"f{i}" for i in range(d)), values, labels, tuple(f"r{i}" for i in range(n)))


def test_exact_balance_and_order():
    fm = imbalanced()
    res = smote_oversample(fm, SmoteConfig(seed=1))
    counts = np.bincount(res.matrix.labels)
    assert counts[0] == counts[1] == 32
    # originals untouched, in order; synthetics appended
    assert np.array_equal(res.matrix.values[:40], fm.values)
    assert np.array_equal(res.matrix.labels[:40], fm.labels)
    assert len(res.provenance) == 32 - 8


def test_synthetic_rows_on_recorded_segments():
    fm = imbalanced(seed=3)
    res = smote_oversample(fm, SmoteConfig(seed=4))
    values = res.matrix.values
    for i, (base, nn, delta) in enumerate(res.provenance):
        expected = fm.values[base] + delta * (fm.values[nn] - fm.values[base])
        got = values[fm.n_rows + i]
        assert np.max(np.abs(got - expected)) <= 1e-12
        lo = np.minimum(fm.values[base], fm.values[nn]) - 1e-12
        hi = np.maximum(fm.values[base], fm.values[nn]) + 1e-12
        assert np.all((got >= lo) & (got <= hi))
        assert fm.labels[base] == 1 and fm.labels[nn] == 1 and base != nn


def test_outputs_stay_in_unit_cube():
    for seed in range(5):
        fm = imbalanced(seed=seed)
        res = smote_oversample(fm, SmoteConfig(seed=seed + 50))
        assert res.matrix.values.min() >= 0.0
        assert res.matrix.values.max() <= 1.0


def test_identical_minority_rows_duplicate_exactly():
    values = np.vstack([np.random.default_rng(0).random((10, 3)), np.tile([0.3, 0.6, 0.9], (3, 1))])
    labels = np.array([0] * 10 + [1] * 3, dtype=np.int64)
    fm = FeatureMatrix(("a", "b", "c"), values, labels, tuple(f"r{i}" for i in range(13)))
    res = smote_oversample(fm, SmoteConfig(k_neighbors=2, seed=9))
    for i in range(len(res.provenance)):
        assert np.array_equal(res.matrix.values[13 + i], np.array([0.3, 0.6, 0.9]))


def test_deterministic_under_seed():
    fm = imbalanced(seed=7)
    a = smote_oversample(fm, SmoteConfig(seed=42))
    b = smote_oversample(fm, SmoteConfig(seed=42))
    assert np.array_equal(a.matrix.values, b.matrix.values)
    assert a.provenance == b.provenance


def test_minority_too_small_fatal():
    fm = imbalanced(minority=1)
    with pytest.raises(DataError):
        smote_oversample(fm, SmoteConfig())


def test_k_reduced_with_warning():
    fm = imbalanced(minority=3)
    with pytest.warns(UserWarning, match="minority neighbours"):
        res = smote_oversample(fm, SmoteConfig(k_neighbors=5, seed=0))
    counts = np.bincount(res.matrix.labels)
    assert counts[0] == counts[1]


def test_target_below_minority_rejected():
    fm = imbalanced(minority=8)
    with pytest.raises(ParameterError):
        smote_oversample(fm, SmoteConfig(target_count=4))


def test_explicit_target_count():
    fm = imbalanced(minority=8)
    res = smote_oversample(fm, SmoteConfig(target_count=20, seed=0))
    assert int(np.bincount(res.matrix.labels)[1]) == 20


def test_round_coded_columns_snap_to_observed_codes():
    rng = np.random.default_rng(2)
    values = np.column_stack([rng.random(20), rng.integers(1, 7, 20).astype(float)])
    labels = np.array([0] * 15 + [1] * 5, dtype=np.int64)
    fm = FeatureMatrix(("energy", "genre_class"), values, labels, tuple(f"r{i}" for i in range(20)))
    assert "genre_class" in CODED_COLUMNS
    res = smote_oversample(fm, SmoteConfig(k_neighbors=3, seed=1, round_coded_columns=True))
    observed = set(values[:, 1].tolist())
    synth = res.matrix.values[20:, 1]
    assert set(synth.tolist()) <= observed


def test_provenance_csv(tmp_path):
    fm = imbalanced(seed=11)
    res = smote_oversample(fm, SmoteConfig(seed=12))
    path = tmp_path / "prov.csv"
    write_provenance_csv(res, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "base_index,neighbour_index,delta"
    assert len(lines) == 1 + len(res.provenance)


def test_balanced_input_is_noop():
    fm = random_matrix(20, 3, 0)
    fm = FeatureMatrix(fm.column_names, fm.values, np.array([0, 1] * 10), fm.ids)
    res = smote_oversample(fm, SmoteConfig(seed=0))
    assert isinstance(res, SmoteResult)
    assert res.matrix.n_rows == 20
    assert res.provenance == ()
