# PyTest Unit tests for logistic regression and IHT undersampling
import pytest
import numpy as np
import conftest

from fraudens.exceptions import (DimensionMismatchException, DivergenceException,
                                 FoldConstructionException, InvalidValueException,
                                 SingleClassException)
from fraudens.preprocess import fit_transform
from fraudens.synthetic import make_imbalanced
from fraudens.resample import (LogisticConfig, LogisticModel, ResampleConfig, balance_dataset,
                               fit_logistic, hardness_scores, iht_undersample,
                               logistic_loss_and_gradient, predict_proba_logistic)
data_name = "imbalanced"

def _planted(seed):
    # 10 majority around -3, one of them moved into the minority cluster at +3
    rng = np.random.default_rng(seed)
    X0 = rng.normal(-3.0, 0.5, (10, 2))
    X0[4] = [3.0, 3.0]
    X1 = rng.normal(3.0, 0.5, (5, 2))
    return np.vstack([X0, X1]), np.r_[np.zeros(10, int), np.ones(5, int)]

def test_logistic_separable_1d():
    print("Test 1-D separable data gives a positive weight")
    X = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    m = fit_logistic(X, [0, 0, 1, 1])
    assert m.weights[0] > 0
    p = predict_proba_logistic(m, np.array([[-3.0], [0.0], [3.0]]))
    assert p[0] < p[1] < p[2]
    assert len(m.loss_history) == m.training_config.epochs + 1

def test_logistic_zero_epochs():
    X = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    m = fit_logistic(X, [0, 0, 1, 1], LogisticConfig(epochs=0))
    assert m.weights.tolist() == [0.0] and m.bias == 0.0
    assert predict_proba_logistic(m, X).tolist() == [0.5] * 4

def test_logistic_values():
    m = LogisticModel(np.array([2.0]), -1.0, LogisticConfig())
    assert predict_proba_logistic(m, np.array([[1.0]]))[0] == pytest.approx(0.731059, abs=1e-6)
    m = LogisticModel(np.array([1.0]), 0.0, LogisticConfig())
    p = predict_proba_logistic(m, np.array([[0.0], [50.0]]))
    assert p[0] == 0.5 and p[1] == pytest.approx(1.0)
    with pytest.raises(DimensionMismatchException):
        predict_proba_logistic(m, np.zeros((1, 2)))

def test_logistic_gradient():
    print("Test analytic gradient against central differences")
    rng = np.random.default_rng(5)
    X = rng.normal(size=(10, 3))
    y = (rng.random(10) < 0.5).astype(float)
    y[:2] = [0, 1]
    l2 = 1e-4
    w = np.zeros(3)
    _, gw, gb = logistic_loss_and_gradient(w, 0.0, X, y, l2)
    h = 1e-5
    num = np.empty(3)
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        num[j] = (logistic_loss_and_gradient(w + e, 0.0, X, y, l2)[0]
                  - logistic_loss_and_gradient(w - e, 0.0, X, y, l2)[0]) / (2 * h)
    num_b = (logistic_loss_and_gradient(w, h, X, y, l2)[0] - logistic_loss_and_gradient(w, -h, X, y, l2)[0]) / (2 * h)
    assert np.allclose(gw, num, rtol=1e-6, atol=1e-10)
    assert gb == pytest.approx(num_b, rel=1e-6, abs=1e-10)

def test_logistic_loss_descends(dataset):
    print("Test default settings never increase the loss on the bundled set")
    _, Z = fit_transform(dataset.features)
    m = fit_logistic(Z, dataset.labels)
    h = np.array(m.loss_history)
    assert np.all(np.diff(h) <= 1e-12)
    assert h[-1] < h[0]

def test_logistic_errors():
    with pytest.raises(SingleClassException):
        fit_logistic(np.zeros((3, 1)), [1, 1, 1])
    with pytest.raises(DivergenceException):
        fit_logistic(np.array([[1e200], [-1e200]]), [1, 0], LogisticConfig(learning_rate=1e200, epochs=5))
    with pytest.raises(InvalidValueException):
        LogisticConfig(learning_rate=0.0)

def test_hardness_separable():
    print("Test separable blobs all score below 0.5")
    ds = conftest.get_dataset("blobs")
    _, Z = fit_transform(ds.features)
    hs = hardness_scores(Z, ds.labels, ResampleConfig(seed=1))
    assert np.all(hs.scores < 0.5)
    assert np.all((hs.scores >= 0) & (hs.scores <= 1))
    assert set(hs.fold_assignment.tolist()) == set(range(5))

def test_hardness_planted_outlier():
    X, y = _planted(2)
    hs = hardness_scores(X, y, ResampleConfig(cv_folds=5, seed=4))
    major = np.flatnonzero(y == 0)
    assert major[np.argmax(hs.scores[major])] == 4

def test_hardness_label_flip():
    print("Test swapping labels leaves hardness unchanged")
    ds = conftest.get_dataset("symmetric")
    cfg = ResampleConfig(seed=9)
    a = hardness_scores(ds.features, ds.labels, cfg)
    b = hardness_scores(ds.features, 1 - ds.labels, cfg)
    assert np.allclose(a.scores, b.scores, atol=1e-9)

def test_hardness_errors():
    with pytest.raises(FoldConstructionException):
        hardness_scores(np.zeros((6, 1)), [0, 0, 0, 0, 1, 1], ResampleConfig(cv_folds=3))
    with pytest.raises(SingleClassException):
        hardness_scores(np.zeros((4, 1)), [0, 0, 0, 0])

def test_iht_planted_outlier():
    print("Test planted majority outlier is removed, 5 + 5 kept")
    X, y = _planted(2)
    Xk, yk, kept = iht_undersample(X, y, ResampleConfig(cv_folds=5, seed=4))
    assert 4 not in kept.tolist()
    assert int((yk == 0).sum()) == 5 and int((yk == 1).sum()) == 5
    assert np.array_equal(Xk, X[kept])

def test_iht_balanced_input_unchanged():
    X = np.arange(8.0).reshape(4, 2)
    y = np.array([0, 1, 0, 1])
    r = iht_undersample(X, y)
    assert r.kept_indices.tolist() == [0, 1, 2, 3]
    assert r.hardness is None
    assert np.array_equal(r.X, X)

@pytest.mark.parametrize("seed", range(10))
def test_iht_invariants(seed):
    ds = make_imbalanced(seed, 200, 20, 4)
    _, Z = fit_transform(ds.features)
    cfg = ResampleConfig(target_ratio=0.5, seed=seed)
    r = iht_undersample(Z, ds.labels, cfg)
    n0, n1 = ds.class_counts()
    target = int(np.floor(n1 / 0.5 + 0.5))
    assert int((r.y == 0).sum()) == target                      # exact balance
    assert int((r.y == 1).sum()) == n1                          # no minority removed
    assert np.all(np.diff(r.kept_indices) > 0)
    kept_major = r.kept_indices[ds.labels[r.kept_indices] == 0]
    s = r.hardness.scores
    assert s[r.removed_indices].min() >= s[kept_major].max()   # hardest removed first
    again = iht_undersample(Z, ds.labels, cfg)
    assert np.array_equal(again.kept_indices, r.kept_indices)

def test_iht_errors():
    with pytest.raises(InvalidValueException):
        ResampleConfig(target_ratio=1.5)
    with pytest.raises(SingleClassException):
        iht_undersample(np.zeros((3, 1)), [0, 0, 0])

def test_balance_dataset(dataset):
    print("Test balancing the bundled set to 50 + 50 raw rows")
    balanced, r = balance_dataset(dataset, ResampleConfig(seed=3))
    assert balanced.class_counts() == (50, 50)
    assert np.array_equal(balanced.features, dataset.features[r.kept_indices])
