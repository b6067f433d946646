import numpy as np
import pytest

from hitsong.classifiers import ModelSpec
from hitsong.errors import ParameterError
from hitsong.features import FeatureMatrix
from hitsong.featsel import forward_select, format_feature, selection_markdown


def dataset_with_perfect_predictor(n=40, seed=0):
    rng = np.random.default_rng(seed)
    labels = np.array([0, 1] * (n // 2))
    values = np.column_stack([rng.random(n), labels.astype(float), rng.random(n)])
    return FeatureMatrix(("noise_a", "perfect", "noise_b"), values, labels, tuple(f"r{i}" for i in range(n)))


def test_perfect_predictor_selected_first_with_unit_accuracy():
    fm = dataset_with_perfect_predictor()
    trace = forward_select(ModelSpec("knn", {"k": 1}), fm, fm.column_names, k=5, seed=1)
    assert trace.steps[0][0] == "perfect"
    assert trace.steps[0][1] == 1.0


def test_trace_scores_strictly_increase():
    rng = np.random.default_rng(2)
    labels = np.array([0, 1] * 30)
    values = np.column_stack(
        [
            labels + rng.normal(0, 0.4, 60),
            labels + rng.normal(0, 0.8, 60),
            rng.random(60),
            rng.random(60),
        ]
    )
    fm = FeatureMatrix(("strong", "weak", "n1", "n2"), values, labels, tuple(f"r{i}" for i in range(60)))
    trace = forward_select(ModelSpec("lr"), fm, fm.column_names, k=5, seed=3)
    scores = [s for _, s in trace.steps]
    assert all(b > a for a, b in zip([trace.baseline] + scores, scores))
    assert len(set(trace.selected)) == len(trace.selected)
    assert set(trace.selected) <= set(fm.column_names)


def test_empty_candidates_rejected():
    fm = dataset_with_perfect_predictor()
    with pytest.raises(ParameterError):
        forward_select(ModelSpec("knn"), fm, [], k=5, seed=0)


def test_pure_noise_can_select_nothing():
    rng = np.random.default_rng(4)
    labels = np.array([0] * 30 + [1] * 10)  # majority baseline 0.75
    values = np.column_stack([np.full(40, 0.5), np.full(40, 0.25)])  # constant features
    fm = FeatureMatrix(("c1", "c2"), values, labels, tuple(f"r{i}" for i in range(40)))
    trace = forward_select(ModelSpec("nb"), fm, fm.column_names, k=5, seed=5)
    assert trace.selected == ()
    assert trace.baseline == 0.75
    assert trace.final_score == trace.baseline


def test_deterministic_trace():
    fm = dataset_with_perfect_predictor(seed=6)
    a = forward_select(ModelSpec("rf", {"n_trees": 5}, seed=1), fm, fm.column_names, k=3, seed=7)
    b = forward_select(ModelSpec("rf", {"n_trees": 5}, seed=1), fm, fm.column_names, k=3, seed=7)
    assert a == b


def test_final_set_score_reproducible():
    from hitsong.featsel import _cv_score
    from hitsong.evaluation import kfold
    from hitsong._rng import sub_seed

    fm = dataset_with_perfect_predictor(seed=8)
    spec = ModelSpec("knn", {"k": 1})
    trace = forward_select(spec, fm, fm.column_names, k=5, seed=9)
    folds = kfold(np.arange(fm.n_rows), fm.labels, k=5, stratified=True, seed=sub_seed(9, "folds"))
    assert _cv_score(spec, fm, list(trace.selected), folds, "accuracy") == trace.final_score


def test_auc_objective():
    fm = dataset_with_perfect_predictor(seed=10)
    trace = forward_select(ModelSpec("nb"), fm, fm.column_names, k=4, seed=11, objective="auc")
    assert trace.baseline == 0.5
    assert trace.steps[0][0] == "perfect"
    with pytest.raises(ParameterError):
        forward_select(ModelSpec("nb"), fm, fm.column_names, objective="f1")


def test_trace_json_roundtrip(tmp_path):
    fm = dataset_with_perfect_predictor(seed=12)
    trace = forward_select(ModelSpec("knn", {"k": 1}), fm, fm.column_names, k=4, seed=13)
    trace.save(tmp_path / "t.json")
    doc = (tmp_path / "t.json").read_text()
    assert '"perfect"' in doc


def test_markdown_markers():
    assert format_feature("popularity_continuity") == "*popularity_continuity*"
    assert format_feature("genre_class") == "*genre_class*"
    assert format_feature("title_topic") == "*title_topic*"
    assert format_feature("lyrics_topic") == "**lyrics_topic**"
    assert format_feature("energy") == "energy"


def test_selection_markdown_table():
    fm = dataset_with_perfect_predictor(seed=14)
    trace = forward_select(ModelSpec("knn", {"k": 1}), fm, fm.column_names, k=4, seed=15)
    md = selection_markdown([trace])
    assert md.startswith("| Classifier | Accepted Feature Combination |")
    assert "| knn |" in md
