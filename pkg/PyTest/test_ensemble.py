# PyTest Unit tests for soft voting and the weight grid search
import pytest
import numpy as np
import pandas as pd

from fraudens.classifiers import (DTParams, KNNParams, MLPParams, ModelParams, RFParams)
from fraudens.ensemble import (EnsembleWeights, SelectionMetric, WeightGrid,
                               base_probabilities, combine_probabilities,
                               ensemble_predict_proba, grid_search_weights,
                               normalize_weights, search_weight_grid, write_grid_table)
from fraudens.evaluate import train_base_models
from fraudens.exceptions import EmptyDatasetException, InvalidValueException
from fraudens.preprocess import fit_transform
data_name = "wide_blobs"

SMALL = ModelParams(dt=DTParams(max_depth=4), rf=RFParams(n_trees=5, seed=1),
                    knn=KNNParams(k=3), mlp=MLPParams(hidden_layers=(8,), epochs=10, seed=2))

@pytest.fixture(scope="module")
def models(dataset):
    _, Z = fit_transform(dataset.features)
    print("Setup: four small base models")
    return Z, train_base_models(Z, dataset.labels, SMALL)

def test_weighted_average():
    print("Test (0.9, 0.8, 0.6, 0.7) under (0.25, 0.5, 0.5, 0.25) is 0.733333")
    P = np.array([[0.9], [0.8], [0.6], [0.7]])
    p = combine_probabilities(P, (0.25, 0.5, 0.5, 0.25))
    assert p[0] == pytest.approx(0.733333, abs=1e-6)
    assert combine_probabilities(P, (0.0, 0.0, 0.0, 2.0))[0] == pytest.approx(0.7)
    with pytest.raises(InvalidValueException):
        combine_probabilities(P, (0.0, 0.0, 0.0, 0.0))

def test_single_weight_selects_model(models):
    Z, ms = models
    p = ensemble_predict_proba(ms, EnsembleWeights((1.0, 0.0, 0.0, 0.0)), Z)
    assert np.array_equal(p, ms[0].predict_proba(Z))

def test_scale_invariance_and_envelope(models):
    Z, ms = models
    P = base_probabilities(ms, Z)
    w = (0.25, 0.5, 0.75, 1.0)
    a = combine_probabilities(P, w)
    b = combine_probabilities(P, [3.0 * v for v in w])
    assert np.allclose(a, b, atol=1e-12)
    assert np.all(a >= P.min(axis=0) - 1e-12) and np.all(a <= P.max(axis=0) + 1e-12)

def test_model_order_checked(models):
    Z, ms = models
    with pytest.raises(InvalidValueException):
        base_probabilities(list(reversed(ms)), Z)

def test_normalize_weights():
    assert normalize_weights((1, 1, 2, 0)) == (0.25, 0.25, 0.5, 0.0)
    assert normalize_weights(EnsembleWeights((0.5, 0.5, 0.5, 0.5))) == (0.25, 0.25, 0.25, 0.25)
    with pytest.raises(InvalidValueException):
        normalize_weights((0, 0, 0, 0))

def test_weights_validation():
    with pytest.raises(InvalidValueException):
        EnsembleWeights((0.0, 0.0, 0.0, 0.0))
    with pytest.raises(InvalidValueException):
        EnsembleWeights((1.0, -0.5, 0.0, 0.0))
    with pytest.raises(InvalidValueException):
        EnsembleWeights((1.0, 1.0))
    w = EnsembleWeights((0.25, 0.5, 0.0, 1.0))
    assert w.to_dict() == {"dt": 0.25, "rf": 0.5, "knn": 0.0, "mlp": 1.0}
    assert EnsembleWeights.from_dict(w.to_dict()) == w

def test_grid_combinations():
    print("Test 5^4 - 1 = 624 combinations in lexicographic order")
    g = WeightGrid()
    W = g.combinations()
    assert W.shape == (624, 4) and g.n_combinations == 624
    assert W[0].tolist() == [0.0, 0.0, 0.0, 0.25]
    assert W[-1].tolist() == [1.0, 1.0, 1.0, 1.0]
    assert WeightGrid((1.0, 0.5, 1.0)).values == (0.5, 1.0)
    assert WeightGrid((0.5, 1.0)).n_combinations == 16
    with pytest.raises(InvalidValueException):
        WeightGrid((0.0,))

def test_identical_models_tie():
    print("Test all combinations tie and the first one wins")
    rng = np.random.default_rng(4)
    y = np.r_[np.zeros(20, int), np.ones(20, int)]
    p = np.where(rng.random(40) < 0.5, 0.2, 0.8)
    r = search_weight_grid(np.vstack([p] * 4), y)
    assert list(r.weights) == [0.0, 0.0, 0.0, 0.25]
    assert np.all(r.scores == r.scores[0])
    assert r.baseline_score == r.score

def test_winner_beats_baseline_and_single_models(models, dataset):
    Z, ms = models
    P = base_probabilities(ms, Z)
    for metric in SelectionMetric:
        r = search_weight_grid(P, dataset.labels, WeightGrid(metric=metric))
        assert r.score >= r.baseline_score
        assert r.score == r.scores.max()
        for i in range(4):
            single = [0.0] * 4
            single[i] = 1.0
            row = np.flatnonzero(np.all(r.combinations == single, axis=1))[0]
            assert r.score >= r.scores[row]

def test_perfect_model_found():
    print("Test a perfect KNN column reaches score 1")
    y = np.r_[np.zeros(10, int), np.ones(10, int)]
    noise = np.full(20, 0.5)
    P = np.vstack([1.0 - y, noise, y.astype(float), 1.0 - y])
    r = search_weight_grid(P, y)
    assert r.score == 1.0 and r.accuracy == 1.0
    assert list(r.weights) == [0.0, 0.0, 0.25, 0.0]

def test_grid_search_weights(models, dataset):
    Z, ms = models
    w, score = grid_search_weights(ms, Z, dataset.labels, WeightGrid(metric=SelectionMetric.ACCURACY))
    assert isinstance(w, EnsembleWeights)
    assert 0.0 <= score <= 1.0

def test_empty_validation():
    with pytest.raises(EmptyDatasetException):
        search_weight_grid(np.zeros((4, 0)), [])

def test_grid_table(tmp_path):
    y = np.array([0, 1, 0, 1])
    P = np.vstack([np.array([0.1, 0.9, 0.2, 0.8])] * 4)
    r = search_weight_grid(P, y, WeightGrid((0.0, 1.0)))
    path = tmp_path / "grid.csv"
    write_grid_table(r, path)
    table = pd.read_csv(path)
    assert list(table.columns) == ["w_dt", "w_rf", "w_knn", "w_mlp", "metric", "accuracy"]
    assert len(table) == 15
    assert table.iloc[0].tolist() == [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]
