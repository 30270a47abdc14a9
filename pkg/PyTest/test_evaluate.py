# PyTest Unit tests for folds, metrics, ROC/AUC and cross-validation
import json
import os
import pytest
import numpy as np
import conftest

from fraudens import evaluate
from fraudens.classifiers import DTParams, KNNParams, MLPParams, ModelParams, RFParams
from fraudens.config import PipelineConfig
from fraudens.ensemble import WeightSelection, base_probabilities, search_weight_grid
from fraudens.dataset import read_dataset
from fraudens.evaluate import (ENSEMBLE, MODEL_NAMES, VALIDATION_FRACTION, ConfusionMatrix, auc,
                               concordance_auc, confusion, cross_validate, load_report,
                               metric_set, metrics_from_confusion, regression_errors, roc_curve,
                               select_weights, stratified_kfold, train_base_models,
                               train_val_split, write_report, write_roc_csv)
from fraudens.exceptions import (DimensionMismatchException, EmptyDatasetException,
                                 FoldConstructionException, FoldException, InvalidValueException,
                                 ModelFormatException, SingleClassException, UnsortedCurveException)
from fraudens.preprocess import fit_scaler, transform
from fraudens.resample import balance_dataset
from fraudens.seeding import derive_seed
from fraudens.synthetic import make_blobs
data_name = "imbalanced"

SMALL = ModelParams(rf=RFParams(n_trees=10), knn=KNNParams(k=3),
                    mlp=MLPParams(hidden_layers=(8,), learning_rate=0.1, epochs=50))

def _labels(tp, fp, fn, tn):
    # y_true, y_pred realizing the four counts
    y_true = np.r_[np.ones(tp), np.zeros(fp), np.ones(fn), np.zeros(tn)].astype(int)
    y_pred = np.r_[np.ones(tp), np.ones(fp), np.zeros(fn), np.zeros(tn)].astype(int)
    return y_true, y_pred

@pytest.fixture(scope="module")
def separable_report():
    ds = make_blobs((100, 100), n_features=2, separation=12.0, seed=21)
    print("Setup: 5-fold run on well separated blobs")
    return ds, cross_validate(ds, PipelineConfig(seed=42, folds=5, models=SMALL))

# ------
# FOLDS
# ------

@pytest.mark.parametrize("k", [2, 5, 10])
def test_fold_partition(dataset, k):
    print(f"Test {k} stratified folds partition the samples")
    y = dataset.labels
    plan = stratified_kfold(y, k, seed=3)
    assert plan.assignments.shape == y.shape
    assert set(plan.assignments.tolist()) == set(range(k))
    sizes = plan.fold_sizes()
    assert max(sizes) - min(sizes) <= 1
    for c in (0, 1):
        n_c = int((y == c).sum())
        per_fold = np.bincount(plan.assignments[y == c], minlength=k)
        assert set(per_fold.tolist()) <= {n_c // k, -(-n_c // k)}
    seen = np.concatenate([test for _, _, test in plan.splits()])
    assert np.array_equal(np.sort(seen), np.arange(y.shape[0]))
    for f, train, test in plan.splits():
        assert np.intersect1d(train, test).shape[0] == 0

def test_balanced_984():
    print("Test 984 samples at 1:1 in 10 folds give 98 or 99 per fold")
    y = np.r_[np.zeros(492, int), np.ones(492, int)]
    plan = stratified_kfold(y, 10, seed=0)
    assert set(plan.fold_sizes()) == {98, 99}
    ones = np.bincount(plan.assignments[y == 1], minlength=10)
    assert set(ones.tolist()) == {49, 50}

def test_fold_errors():
    with pytest.raises(InvalidValueException):
        stratified_kfold([0, 1, 0, 1], 1, seed=0)
    with pytest.raises(FoldConstructionException):
        stratified_kfold([0, 0, 0, 1], 2, seed=0)
    a = stratified_kfold(np.r_[np.zeros(30), np.ones(10)], 5, seed=8)
    b = stratified_kfold(np.r_[np.zeros(30), np.ones(10)], 5, seed=8)
    assert np.array_equal(a.assignments, b.assignments)

def test_train_val_split(dataset):
    train, val = train_val_split(dataset.labels, 0.2, seed=1)
    assert np.intersect1d(train, val).shape[0] == 0
    assert train.shape[0] + val.shape[0] == dataset.n_samples
    assert int((dataset.labels[val] == 1).sum()) == 10
    assert int((dataset.labels[val] == 0).sum()) == 200
    with pytest.raises(InvalidValueException):
        train_val_split(dataset.labels, 1.0)
    with pytest.raises(FoldConstructionException):
        train_val_split([0, 0, 1], 0.5)

# --------
# METRICS
# --------

@pytest.mark.parametrize("counts, expected", [
    ((738, 0, 5, 719), (99.66, 99.65, 99.66, 99.66, 0.34, 0.34, 5.85)),
    ((742, 1, 20, 699), (98.56, None, None, None, 1.44, 1.44, 11.98)),
    ((741, 2, 1, 718), (99.79, None, None, None, 0.21, 0.21, 4.53)),
    ((743, 0, 0, 719), (100.0, 100.0, 100.0, 100.0, 0.0, 0.0, 0.0)),
])
def test_reported_figures(counts, expected):
    print(f"Test confusion counts {counts} reproduce the rounded percentages")
    y_true, y_pred = _labels(*counts)
    cm = confusion(y_true, y_pred)
    assert (cm.tp, cm.fp, cm.fn, cm.tn) == counts
    pct = metric_set(y_true, y_pred).percent()
    names = ("accuracy", "macro_precision", "macro_recall", "macro_f1", "mae", "mse", "rmse")
    for name, value in zip(names, expected):
        if value is not None:
            assert pct[name] == pytest.approx(value, abs=1e-9), name

def test_metrics_from_confusion():
    acc, p, r, f1 = metrics_from_confusion(ConfusionMatrix(738, 0, 5, 719))
    assert acc == pytest.approx(0.99658, abs=1e-5)
    assert p == pytest.approx(0.99655, abs=1e-5)
    assert r == pytest.approx(0.99664, abs=1e-5)
    assert f1 == pytest.approx(0.99658, abs=1e-5)
    with pytest.raises(EmptyDatasetException):
        metrics_from_confusion(ConfusionMatrix(0, 0, 0, 0))
    with pytest.raises(InvalidValueException):
        ConfusionMatrix(-1, 0, 0, 0)

def test_never_predicted_class():
    ms = metric_set([0, 0, 1, 1], [0, 0, 0, 0])
    assert ms.precision == (0.5, 0.0)
    assert ms.recall == (1.0, 0.0)
    assert ms.f1[1] == 0.0
    assert ms.specificity == 1.0

def test_hard_label_errors():
    print("Test MAE equals MSE and 1 - accuracy on 0/1 vectors")
    rng = np.random.default_rng(12)
    for _ in range(1000):
        n = int(rng.integers(1, 30))
        t = rng.integers(0, 2, n)
        p = rng.integers(0, 2, n)
        mae, mse, rmse = regression_errors(t, p)
        assert mae == mse
        assert rmse == pytest.approx(np.sqrt(mae))
        assert mae == pytest.approx(1.0 - np.mean(t == p))

def test_metric_errors():
    with pytest.raises(DimensionMismatchException):
        confusion([0, 1], [0])
    with pytest.raises(InvalidValueException):
        confusion([0, 2], [0, 1])
    with pytest.raises(EmptyDatasetException):
        regression_errors([], [])

# ---------
# ROC/AUC
# ---------

def test_roc_example():
    pts = roc_curve([0, 1, 1, 0], [0.1, 0.9, 0.8, 0.4])
    assert pts.tolist() == [[0.0, 0.0], [0.0, 0.5], [0.0, 1.0], [0.5, 1.0], [1.0, 1.0]]
    assert auc(pts) == 1.0

def test_roc_ties():
    print("Test tied scores cross the threshold together")
    pts = roc_curve([0, 1], [0.5, 0.5])
    assert pts.tolist() == [[0.0, 0.0], [1.0, 1.0]]
    assert auc(pts) == 0.5
    pts = roc_curve([0, 1, 0, 1], [0.2, 0.2, 0.7, 0.9])
    assert pts.tolist() == [[0.0, 0.0], [0.0, 0.5], [0.5, 0.5], [1.0, 1.0]]

def test_auc_matches_concordance():
    rng = np.random.default_rng(99)
    for _ in range(100):
        n = int(rng.integers(4, 60))
        y = rng.integers(0, 2, n)
        y[:2] = [0, 1]
        s = np.round(rng.random(n), 1)                  # coarse scores, many ties
        pts = roc_curve(y, s)
        assert np.all(np.diff(pts[:, 0]) >= 0) and np.all(np.diff(pts[:, 1]) >= 0)
        assert pts[-1].tolist() == [1.0, 1.0]
        assert auc(pts) == pytest.approx(concordance_auc(y, s), abs=1e-12)

def test_roc_errors():
    with pytest.raises(SingleClassException):
        roc_curve([1, 1], [0.2, 0.3])
    with pytest.raises(InvalidValueException):
        roc_curve([0, 1], [0.2, np.nan])
    with pytest.raises(UnsortedCurveException):
        auc(np.array([[0.0, 0.0], [0.5, 0.5], [0.4, 1.0]]))
    assert auc(np.array([[0.0, 0.0]])) == 0.0

# -----------------
# CROSS-VALIDATION
# -----------------

def test_separable_folds_exact(separable_report):
    ds, report = separable_report
    assert len(report.folds) == 5
    for name in MODEL_NAMES:
        assert report.metric_values(name, "accuracy").tolist() == [1.0] * 5, name
    for name in MODEL_NAMES:
        assert report.roc[name][-1].tolist() == [1.0, 1.0]
    assert sum(f.n_test for f in report.folds) == ds.n_samples
    assert len(report.selection) == 1
    assert all(f.weights == report.selection[0].weights for f in report.folds)

def test_aggregate(separable_report):
    _, report = separable_report
    agg = report.aggregate()
    assert set(agg) == set(MODEL_NAMES)
    for name in MODEL_NAMES:
        v = report.metric_values(name, "macro_f1")
        assert agg[name]["macro_f1"]["mean"] == pytest.approx(v.mean())
        assert agg[name]["macro_f1"]["std"] == pytest.approx(v.std())
    assert agg[ENSEMBLE]["accuracy"] == {"mean": 1.0, "std": 0.0}

def test_deterministic(separable_report):
    print("Test a second run gives the same report apart from timings")
    ds, report = separable_report
    again = cross_validate(ds, PipelineConfig(seed=42, folds=5, models=SMALL))
    a, b = report.to_dict(), again.to_dict()
    a.pop("timings_ms")
    b.pop("timings_ms")
    assert a == b

def test_per_fold_selection():
    ds = make_blobs((30, 30), n_features=2, separation=6.0, seed=5)
    cfg = PipelineConfig(seed=1, folds=3, models=SMALL, weight_selection=WeightSelection.PER_FOLD)
    report = cross_validate(ds, cfg)
    assert len(report.selection) == 3
    assert report.to_dict()["ensemble_weights"]["selection"] == "per_fold"

def test_fold_failure():
    print("Test a failing fold is named and keeps the cause's code")
    ds = make_blobs((10, 10), n_features=2, seed=2)
    cfg = PipelineConfig(seed=1, folds=2, models=ModelParams(knn=KNNParams(k=99)))
    with pytest.raises(FoldException) as e:
        cross_validate(ds, cfg)
    assert e.value.fold == 0
    assert e.value.number == 0x102
    assert isinstance(e.value.cause, InvalidValueException)

def test_report_files(separable_report, tmp_path):
    _, report = separable_report
    path = tmp_path / "report.json"
    write_report(report, path)
    doc = load_report(path)
    assert doc["seed"] == 42
    assert doc["aggregate"] == report.aggregate()
    assert len(doc["folds"]) == 5
    assert doc["config"]["folds"] == 5
    write_roc_csv(report.roc[ENSEMBLE], tmp_path / "roc.csv")
    lines = (tmp_path / "roc.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "fpr,tpr"
    assert lines[-1] == "1.0,1.0"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"seed": 1}), encoding="utf-8")
    with pytest.raises(ModelFormatException):
        load_report(bad)

def test_select_weights_scales_inner_split(monkeypatch):
    print("Test a raw-feature weight search fits its scaler on the inner part only")
    ds = make_blobs((40, 40), n_features=3, separation=3.0, seed=9)
    cfg = PipelineConfig(seed=3, models=SMALL)
    fitted_rows = []

    def recording_fit(features):
        fitted_rows.append(np.asarray(features).shape[0])
        return fit_scaler(features)

    monkeypatch.setattr(evaluate, "fit_scaler", recording_fit)
    result = select_weights(ds.features, ds.labels, cfg, 11, scale=True)
    inner, val = train_val_split(ds.labels, VALIDATION_FRACTION, derive_seed(11, "inner"))
    assert fitted_rows == [inner.shape[0]]
    scaler = fit_scaler(ds.features[inner])
    models = train_base_models(transform(scaler, ds.features[inner]), ds.labels[inner],
                               cfg.models.seeded(11, cfg.threads))
    expected = search_weight_grid(base_probabilities(models, transform(scaler, ds.features[val])),
                                  ds.labels[val], cfg.grid)
    assert np.array_equal(result.scores, expected.scores)
    assert result.weights.to_dict() == expected.weights.to_dict()

# ------------------
# BUNDLED DATA SETS
# ------------------

@pytest.fixture(scope="module")
def bundled_report(dataset):
    print("Setup: IHT then 10-fold run on the bundled 1000:50 set")
    cfg = PipelineConfig(seed=42)
    balanced, _ = balance_dataset(dataset, cfg.resample_config())
    return balanced, cross_validate(balanced, cfg)

def test_bundled_balanced(bundled_report):
    balanced, report = bundled_report
    assert balanced.class_counts() == (50, 50)
    assert len(report.folds) == 10
    assert sum(f.n_test for f in report.folds) == 100

def test_bundled_ensemble_f1(bundled_report):
    print("Test ensemble macro-F1 is within 0.01 of the best single model")
    _, report = bundled_report
    agg = report.aggregate()
    best = max(agg[name]["macro_f1"]["mean"] for name in MODEL_NAMES[:-1])
    print(f"  best single {best:.4f}, ensemble {agg[ENSEMBLE]['macro_f1']['mean']:.4f}")
    assert agg[ENSEMBLE]["macro_f1"]["mean"] >= best - 0.01

def test_bundled_separable_exact():
    print("Test every model and the ensemble are exact on the separable bundled set")
    ds = conftest.get_dataset("separable")
    cfg = PipelineConfig(seed=42, models=SMALL)
    balanced, _ = balance_dataset(ds, cfg.resample_config())
    assert balanced.class_counts() == (50, 50)
    report = cross_validate(balanced, cfg)
    for name in MODEL_NAMES:
        assert report.metric_values(name, "accuracy").tolist() == [1.0] * 10, name

@pytest.mark.skipif(not os.path.isfile(conftest.CREDITCARD), reason="FRAUDENS_CREDITCARD not set")
def test_creditcard_end_to_end():
    print("Test the public credit card file at 1:1 balance and 10 folds")
    ds, _, _ = read_dataset(conftest.CREDITCARD, "Class")
    cfg = PipelineConfig(seed=42)
    balanced, _ = balance_dataset(ds, cfg.resample_config())
    assert balanced.class_counts() == (492, 492)
    agg = cross_validate(balanced, cfg).aggregate()
    for name in MODEL_NAMES[:-1]:
        print(f"  {name}: accuracy {agg[name]['accuracy']['mean']:.4f}")
        assert agg[name]["accuracy"]["mean"] >= 0.95, name
    assert agg[ENSEMBLE]["accuracy"]["mean"] >= 0.99
    best = max(agg[name]["macro_f1"]["mean"] for name in MODEL_NAMES[:-1])
    assert agg[ENSEMBLE]["macro_f1"]["mean"] >= best - 0.005
