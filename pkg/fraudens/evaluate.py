# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# evaluate - Stratified cross-validation of the base learners and the ensemble
#
# Part of the fraudens hybrid ensemble fraud detection package
#
# Python Compatibility: Requires Python 3.8 or later
# Doc Environment: Sphinx with autodoc, autosummary, napoleon, and autoenum
#
# -----------------------------------------------------------------------------
# MIT License - see LICENSE.txt
# -----------------------------------------------------------------------------
# Edit History:
# 17-Oct-26 Initial edit
# 17-Oct-26 Pooled out-of-fold ROC per model in the report
# 17-Oct-26 Optional inner-split scaling in select_weights, ROC files via pandas
# -----------------------------------------------------------------------------

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from typing_extensions import TypedDict

from fraudens.classifiers import ModelParams, train_model
from fraudens.config import PipelineConfig
from fraudens.dataset import Dataset, write_frame
from fraudens.ensemble import (EnsembleWeights, GridSearchResult,
                               WeightSelection, base_probabilities,
                               combine_probabilities, search_weight_grid)
from fraudens.exceptions import (DataFileException, FoldException,
                                 ModelFormatException)
from fraudens.folds import FoldPlan, stratified_kfold, train_val_split
from fraudens.metrics import (ConfusionMatrix, MetricSet, auc,
                              concordance_auc, confusion,
                              metrics_from_confusion, metric_set,
                              regression_errors, roc_curve)
from fraudens.model import BASE_KINDS, TrainedModel
from fraudens.preprocess import fit_scaler, transform
from fraudens.seeding import derive_seed

__all__ = [
    "ConfusionMatrix", "MetricSet", "FoldPlan", "ModelFoldResult", "FoldResult", "EvaluationReport",
    "stratified_kfold", "train_val_split", "confusion", "metrics_from_confusion", "metric_set",
    "regression_errors", "roc_curve", "auc", "concordance_auc", "select_weights", "cross_validate",
    "write_report", "load_report", "write_roc_csv",
]

logger = logging.getLogger(__name__)

ENSEMBLE = "ensemble"
"""Report key of the combined model, next to the base kinds"""

MODEL_NAMES = tuple(k.value for k in BASE_KINDS) + (ENSEMBLE,)

VALIDATION_FRACTION = 0.2
"""Share of each training fold held out for the weight search"""

REPORT_KEYS = ("config", "seed", "folds", "aggregate", "ensemble_weights", "timings_ms")

class ModelFoldDocument(TypedDict):
    confusion: Dict[str, int]
    metrics: Dict[str, object]
    percent: Dict[str, Optional[float]]

class ReportDocument(TypedDict):
    config: dict
    seed: int
    folds: List[Dict[str, object]]
    aggregate: Dict[str, Dict[str, Dict[str, float]]]
    ensemble_weights: Dict[str, object]
    roc: Dict[str, Dict[str, object]]
    timings_ms: Dict[str, object]

@dataclass(frozen=True, eq=False)
class ModelFoldResult:
    """One model scored on one test fold"""
    confusion: ConfusionMatrix
    metrics: MetricSet

    def to_dict(self) -> ModelFoldDocument:
        return {"confusion": self.confusion.to_dict(), "metrics": self.metrics.to_dict(),
                "percent": self.metrics.percent()}

@dataclass(frozen=True, eq=False)
class FoldResult:
    """Everything measured on one fold.

    Attributes:
        fold: Fold index.
        n_train: Training samples.
        n_test: Test samples.
        weights: Ensemble weights applied to this fold.
        models: Results keyed by model name, the base kinds then ``"ensemble"``.
        test_indices: Dataset rows tested in this fold.
        probabilities: ``5 x n_test`` P(class 1) of each model on those rows.
        timings_ms: ``fit_ms`` and ``predict_ms`` per model name.

    """
    fold: int
    n_train: int
    n_test: int
    weights: EnsembleWeights
    models: Dict[str, ModelFoldResult]
    test_indices: np.ndarray
    probabilities: np.ndarray
    timings_ms: Dict[str, Dict[str, float]]

    def to_dict(self) -> dict:
        return {"fold": self.fold, "n_train": self.n_train, "n_test": self.n_test,
                "weights": self.weights.to_dict(),
                "models": {name: r.to_dict() for name, r in self.models.items()}}

@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Result of :func:`cross_validate`.

    Attributes:
        config: Configuration echo.
        seed: Root seed of the run.
        plan: Fold assignment.
        folds: Per fold results in fold order.
        selection: Weight searches run, one for ``once`` selection or one
            per fold.
        roc: Pooled out-of-fold ROC points per model name; every sample is
            scored once, by the fold that tested it.
        timings_ms: Stage totals in milliseconds.

    """
    config: dict
    seed: int
    plan: FoldPlan
    folds: List[FoldResult]
    selection: List[GridSearchResult]
    roc: Dict[str, np.ndarray]
    timings_ms: Dict[str, float] = field(default_factory=dict)

    def metric_values(self, model: str, metric: str) -> np.ndarray:
        """One value per fold of a scalar metric"""
        return np.array([getattr(f.models[model].metrics, metric) for f in self.folds], dtype=np.float64)

    def aggregate(self) -> Dict[str, Dict[str, Dict[str, float]]]:
        """Mean and population standard deviation over folds, per model and metric"""
        out = {}
        for name in MODEL_NAMES:
            out[name] = {}
            for metric in MetricSet.SCALARS:
                values = [getattr(f.models[name].metrics, metric) for f in self.folds]
                if any(v is None for v in values):
                    continue
                v = np.array(values, dtype=np.float64)
                out[name][metric] = {"mean": float(np.mean(v)), "std": float(np.std(v))}
        return out

    def pooled_auc(self, model: str) -> float:
        return auc(self.roc[model])

    def to_dict(self) -> ReportDocument:
        folds = [f.to_dict() for f in self.folds]
        timings = {"stages": dict(self.timings_ms),
                   "folds": [{"fold": f.fold, **f.timings_ms} for f in self.folds]}
        weights = {
            "selection": self.config.get("grid", {}).get("selection", WeightSelection.ONCE.value),
            "searches": [{"weights": s.weights.to_dict(), "score": s.score, "accuracy": s.accuracy,
                          "baseline_score": s.baseline_score, "metric": s.metric.value}
                         for s in self.selection],
            "per_fold": [f.weights.to_dict() for f in self.folds],
        }
        roc = {name: {"auc": self.pooled_auc(name), "points": self.roc[name].tolist()} for name in MODEL_NAMES}
        return {"config": self.config, "seed": self.seed, "folds": folds, "aggregate": self.aggregate(),
                "ensemble_weights": weights, "roc": roc, "timings_ms": timings}

def _elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0

def train_base_models(X: np.ndarray, y: np.ndarray, params: ModelParams,
                      timings: Optional[Dict[str, Dict[str, float]]] = None) -> List[TrainedModel]:
    """Fit DT, RF, KNN and MLP on the same data, in that order"""
    models = []
    for kind in BASE_KINDS:
        start = time.perf_counter()
        models.append(train_model(kind, X, y, params.for_kind(kind)))
        if timings is not None:
            timings.setdefault(kind.value, {})["fit_ms"] = _elapsed_ms(start)
        logger.debug("stage=train model=%s samples=%d", kind, X.shape[0])
    return models

def select_weights(X: np.ndarray, y: np.ndarray, config: PipelineConfig, seed: int,
                   scale: bool = False) -> GridSearchResult:
    """Weight search on a stratified hold-out of training data.

    The four models are fitted on the inner training part and the grid is
    scored on the held-out ``VALIDATION_FRACTION``; the test fold is never
    seen.

    Args:
        X: Training features, standardized unless ``scale`` is set.
        y: Training labels.
        config: Model parameters, grid and thread bound.
        seed: Parent of the split and model seeds.
        scale: Fit a scaler on the inner training part only and apply it
            to both parts, for callers holding raw features.

    """
    inner, val = train_val_split(y, VALIDATION_FRACTION, derive_seed(seed, "inner"))
    X_inner, X_val = X[inner], X[val]
    if scale:
        scaler = fit_scaler(X_inner)
        X_inner, X_val = transform(scaler, X_inner), transform(scaler, X_val)
    models = train_base_models(X_inner, y[inner], config.models.seeded(seed, config.threads))
    return search_weight_grid(base_probabilities(models, X_val), y[val], config.grid)

def _evaluate_fold(fold: int, train: np.ndarray, test: np.ndarray, dataset: Dataset,
                   config: PipelineConfig, frozen: Optional[GridSearchResult]) -> Tuple[FoldResult, Optional[GridSearchResult]]:
    seed = derive_seed(config.seed, "fold", fold)
    X, y = dataset.features, dataset.labels
    scaler = fit_scaler(X[train])
    X_train = transform(scaler, X[train])
    X_test = transform(scaler, X[test])
    search = None
    if frozen is None:
        search = select_weights(X_train, y[train], config, seed)
        weights = search.weights
    else:
        weights = frozen.weights
    timings: Dict[str, Dict[str, float]] = {}
    models = train_base_models(X_train, y[train], config.models.seeded(seed, config.threads), timings)
    probs = []
    for kind, model in zip(BASE_KINDS, models):
        start = time.perf_counter()
        probs.append(model.predict_proba(X_test))
        timings[kind.value]["predict_ms"] = _elapsed_ms(start)
    start = time.perf_counter()
    probs.append(combine_probabilities(np.vstack(probs), weights))
    timings[ENSEMBLE] = {"predict_ms": _elapsed_ms(start)}
    probs = np.vstack(probs)
    y_test = y[test]
    results = {}
    for name, p in zip(MODEL_NAMES, probs):
        pred = (p >= 0.5).astype(np.int64)
        results[name] = ModelFoldResult(confusion(y_test, pred), metric_set(y_test, pred, p))
    logger.debug("stage=fold fold=%d train=%d test=%d ensemble_accuracy=%.6f",
                 fold, train.shape[0], test.shape[0], results[ENSEMBLE].metrics.accuracy)
    return FoldResult(fold, int(train.shape[0]), int(test.shape[0]), weights, results, test, probs, timings), search

def cross_validate(dataset: Dataset, config: PipelineConfig) -> EvaluationReport:
    """Stratified k-fold evaluation of the four base models and their ensemble.

    For every fold the scaler is fitted on the training part only and
    applied to both parts, the four models are trained, the ensemble
    weights are chosen (see :class:`~fraudens.ensemble.WeightSelection`)
    and every model is scored on the test part. Each fold draws its random
    streams from ``(seed, "fold", index)``.

    Raises:
        FoldException: A fold failed; ``fold`` names it and ``number``
            carries the cause's code.
        FoldConstructionException: A class has fewer samples than folds.

    """
    start = time.perf_counter()
    plan = stratified_kfold(dataset.labels, config.folds, derive_seed(config.seed, "cv"))
    folds: List[FoldResult] = []
    searches: List[GridSearchResult] = []
    frozen = None
    for fold, train, test in plan.splits():
        try:
            result, search = _evaluate_fold(fold, train, test, dataset, config, frozen)
        except Exception as ex:
            raise FoldException(fold, ex) from ex
        if search is not None:
            searches.append(search)
            if config.weight_selection == WeightSelection.ONCE:
                frozen = search
        folds.append(result)
    cv_ms = _elapsed_ms(start)
    pooled = np.empty((len(MODEL_NAMES), dataset.n_samples))
    for f in folds:
        pooled[:, f.test_indices] = f.probabilities
    roc = {name: roc_curve(dataset.labels, p) for name, p in zip(MODEL_NAMES, pooled)}
    report = EvaluationReport(config.to_dict(), config.seed, plan, folds, searches, roc,
                              {"cross_validate": cv_ms})
    logger.info("stage=evaluate folds=%d samples=%d ensemble_accuracy_mean=%.6f elapsed_ms=%.1f",
                plan.k, dataset.n_samples, float(report.metric_values(ENSEMBLE, "accuracy").mean()), cv_ms)
    return report

def write_report(report: Union[EvaluationReport, ReportDocument], path: Union[str, Path]) -> None:
    """Write the report document as indented JSON"""
    doc = report.to_dict() if isinstance(report, EvaluationReport) else report
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")
    except OSError as ex:
        raise DataFileException(path, f"Cannot write file: {ex.strerror or ex}") from ex

def load_report(path: Union[str, Path]) -> ReportDocument:
    """Read a report document back

    Raises:
        DataFileException: The file cannot be read.
        ModelFormatException: It is not a report document.

    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as ex:
        raise DataFileException(path, f"Cannot read file: {ex.strerror or ex}") from ex
    except json.JSONDecodeError as ex:
        raise ModelFormatException(f"Report {path} is not valid JSON: {ex}") from ex
    missing = [k for k in REPORT_KEYS if not isinstance(doc, dict) or k not in doc]
    if missing:
        raise ModelFormatException(f"Report {path} lacks keys {missing}")
    return doc

def write_roc_csv(points: Sequence[Sequence[float]], path: Union[str, Path]) -> None:
    """Write ROC points as CSV ``fpr,tpr``"""
    write_frame(pd.DataFrame(np.asarray(points, dtype=np.float64).reshape(-1, 2), columns=["fpr", "tpr"]), path)
