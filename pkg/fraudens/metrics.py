# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# metrics - Confusion matrix, classification and error metrics, ROC and AUC
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
# 17-Oct-26 Count based scores vectorized for the ensemble weight search
# -----------------------------------------------------------------------------

from dataclasses import asdict, dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from fraudens.exceptions import (DimensionMismatchException,
                                 EmptyDatasetException, InvalidValueException,
                                 SingleClassException, UnsortedCurveException)

@dataclass(frozen=True)
class ConfusionMatrix:
    """Binary confusion counts, class 1 (fraudulent) positive.

    Attributes:
        tp: Fraud predicted as fraud.
        fp: Normal predicted as fraud.
        fn: Fraud predicted as normal.
        tn: Normal predicted as normal.

    """
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise InvalidValueException(f"Confusion count {name} must be a non-negative integer, got {value}")
            object.__setattr__(self, name, int(value))

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)

def class_scores(tp, fp, fn) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Precision, recall and F1 of one class from its counts.

    Works elementwise on arrays of counts. A class never predicted has
    precision 0, a class never present has recall 0, and F1 is 0 when
    both precision and recall are 0.

    """
    tp = np.asarray(tp, dtype=np.float64)
    fp = np.asarray(fp, dtype=np.float64)
    fn = np.asarray(fn, dtype=np.float64)
    pred = tp + fp
    actual = tp + fn
    precision = np.divide(tp, pred, out=np.zeros_like(tp), where=pred > 0)
    recall = np.divide(tp, actual, out=np.zeros_like(tp), where=actual > 0)
    denom = precision + recall
    f1 = np.divide(2.0 * precision * recall, denom, out=np.zeros_like(tp), where=denom > 0)
    return precision, recall, f1

def macro_scores(tp, fp, fn, tn) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(accuracy, macro precision, macro recall, macro F1), elementwise over count arrays"""
    p1, r1, f1 = class_scores(tp, fp, fn)
    # class 0 as the positive class: its tp is tn, fp is fn, fn is fp
    p0, r0, f0 = class_scores(tn, fn, fp)
    total = np.asarray(tp + fp + fn + tn, dtype=np.float64)
    accuracy = (np.asarray(tp, dtype=np.float64) + tn) / total
    return accuracy, (p0 + p1) / 2.0, (r0 + r1) / 2.0, (f0 + f1) / 2.0

@dataclass(frozen=True)
class MetricSet:
    """Scores of one model on one set of predictions.

    Precision, recall and F1 are macro averages, the unweighted mean over
    the two classes. The error metrics compare hard 0/1 labels, so
    ``mae == mse``, ``rmse == sqrt(mae)`` and ``accuracy == 1 - mae``.

    Attributes:
        accuracy: Fraction classified correctly.
        macro_precision: Mean of the two per-class precisions.
        macro_recall: Mean of the two per-class recalls.
        macro_f1: Mean of the two per-class F1 scores.
        mae: Mean absolute label error.
        mse: Mean squared label error.
        rmse: Square root of ``mse``.
        auc: Area under the ROC curve of the scores, ``None`` without scores
            or when one class is absent.
        specificity: True negative rate, the recall of class 0.
        precision: (class 0, class 1) precision.
        recall: (class 0, class 1) recall.
        f1: (class 0, class 1) F1.

    """
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    mae: float
    mse: float
    rmse: float
    auc: Optional[float] = None
    specificity: float = 0.0
    precision: Tuple[float, float] = (0.0, 0.0)
    recall: Tuple[float, float] = (0.0, 0.0)
    f1: Tuple[float, float] = (0.0, 0.0)

    SCALARS = ("accuracy", "macro_precision", "macro_recall", "macro_f1", "mae", "mse", "rmse",
               "auc", "specificity")

    def to_dict(self) -> dict:
        d = {name: getattr(self, name) for name in self.SCALARS}
        d.update(precision=list(self.precision), recall=list(self.recall), f1=list(self.f1))
        return d

    def percent(self) -> Dict[str, Optional[float]]:
        """The scalar metrics as percentages rounded to 2 decimals"""
        return {name: None if getattr(self, name) is None else round(100.0 * getattr(self, name), 2)
                for name in self.SCALARS}

def _binary_vector(values: Sequence[int], name: str) -> np.ndarray:
    v = np.asarray(values)
    if v.ndim != 1:
        raise DimensionMismatchException(f"{name} must be a vector, got shape {v.shape}")
    if not np.all((v == 0) | (v == 1)):
        raise InvalidValueException(f"{name} must hold only 0 and 1")
    return v.astype(np.int64)

def confusion(y_true: Sequence[int], y_pred: Sequence[int]) -> ConfusionMatrix:
    """Count agreements between true and predicted 0/1 labels

    Raises:
        DimensionMismatchException: The vectors differ in length.
        InvalidValueException: A value is not 0 or 1.

    """
    t = _binary_vector(y_true, "y_true")
    p = _binary_vector(y_pred, "y_pred")
    if t.shape != p.shape:
        raise DimensionMismatchException(f"{t.shape[0]} true labels vs {p.shape[0]} predictions")
    tp = int(np.sum((t == 1) & (p == 1)))
    fp = int(np.sum((t == 0) & (p == 1)))
    fn = int(np.sum((t == 1) & (p == 0)))
    return ConfusionMatrix(tp, fp, fn, t.shape[0] - tp - fp - fn)

def metrics_from_confusion(cm: ConfusionMatrix) -> Tuple[float, float, float, float]:
    """(accuracy, macro precision, macro recall, macro F1)

    Example:
        ``ConfusionMatrix(tp=738, fp=0, fn=5, tn=719)`` gives accuracy
        0.99658, macro precision 0.99655, macro recall 0.99664 and macro
        F1 0.99658.

    Raises:
        EmptyDatasetException: The matrix counts nothing.

    """
    if cm.total == 0:
        raise EmptyDatasetException("Cannot score an empty confusion matrix")
    return tuple(float(v) for v in macro_scores(cm.tp, cm.fp, cm.fn, cm.tn))

def regression_errors(y_true: Sequence[float], y_pred: Sequence[float]) -> Tuple[float, float, float]:
    """(MAE, MSE, RMSE) between two equal length vectors

    Raises:
        EmptyDatasetException: The vectors are empty.
        DimensionMismatchException: The lengths differ.

    """
    t = np.asarray(y_true, dtype=np.float64)
    p = np.asarray(y_pred, dtype=np.float64)
    if t.shape != p.shape:
        raise DimensionMismatchException(f"{t.shape} true values vs {p.shape} predictions")
    if t.size == 0:
        raise EmptyDatasetException("Cannot compute errors of empty vectors")
    diff = t - p
    mse = float(np.mean(diff * diff))
    return float(np.mean(np.abs(diff))), mse, float(np.sqrt(mse))

def roc_curve(y_true: Sequence[int], scores: Sequence[float]) -> np.ndarray:
    """ROC points as an ``m x 2`` array of (false positive rate, true positive rate).

    One point per distinct score, taken as a threshold in descending order,
    after a leading (0, 0). Samples sharing a score cross the threshold
    together, and the last point is always (1, 1).

    Example:
        ``roc_curve([0, 1, 1, 0], [0.1, 0.9, 0.8, 0.4])`` gives
        (0, 0), (0, 0.5), (0, 1), (0.5, 1), (1, 1).

    Raises:
        SingleClassException: Only one class in ``y_true``.
        InvalidValueException: A score is not finite.

    """
    t = _binary_vector(y_true, "y_true")
    s = np.asarray(scores, dtype=np.float64)
    if s.shape != t.shape:
        raise DimensionMismatchException(f"{t.shape[0]} labels vs {s.shape[0]} scores")
    if not np.all(np.isfinite(s)):
        raise InvalidValueException("ROC scores must be finite")
    n_pos = int(t.sum())
    n_neg = t.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassException("ROC curve needs both classes present")
    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    t_sorted = t[order]
    # last position of each run of equal scores
    group_end = np.r_[np.flatnonzero(np.diff(s_sorted) != 0), s_sorted.shape[0] - 1]
    tps = np.cumsum(t_sorted)[group_end]
    fps = (group_end + 1) - tps
    fpr = np.r_[0.0, fps / n_neg]
    tpr = np.r_[0.0, tps / n_pos]
    return np.column_stack((fpr, tpr))

def auc(points: np.ndarray) -> float:
    """Trapezoidal area under a curve of (x, y) points sorted by ``x``

    Raises:
        UnsortedCurveException: ``x`` decreases somewhere.

    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DimensionMismatchException(f"Curve must be an m x 2 array, got shape {pts.shape}")
    if pts.shape[0] < 2:
        return 0.0
    dx = np.diff(pts[:, 0])
    if np.any(dx < 0):
        raise UnsortedCurveException("Curve points must be sorted by increasing false positive rate")
    return float(np.sum(dx * (pts[1:, 1] + pts[:-1, 1]) / 2.0))

def concordance_auc(y_true: Sequence[int], scores: Sequence[float]) -> float:
    """AUC by brute force: P(positive outscores negative) + P(tie) / 2

    Quadratic in the sample count; meant for checking :func:`auc`.

    """
    t = _binary_vector(y_true, "y_true")
    s = np.asarray(scores, dtype=np.float64)
    pos = s[t == 1]
    neg = s[t == 0]
    if pos.size == 0 or neg.size == 0:
        raise SingleClassException("AUC needs both classes present")
    greater = np.mean(pos[:, None] > neg[None, :])
    ties = np.mean(pos[:, None] == neg[None, :])
    return float(greater + 0.5 * ties)

def metric_set(y_true: Sequence[int], y_pred: Sequence[int], scores: Optional[Sequence[float]] = None) -> MetricSet:
    """Every metric of one set of hard predictions, plus AUC when ``scores`` are given"""
    cm = confusion(y_true, y_pred)
    acc, mp, mr, mf = metrics_from_confusion(cm)
    mae, mse, rmse = regression_errors(y_true, y_pred)
    p1, r1, f1 = class_scores(cm.tp, cm.fp, cm.fn)
    p0, r0, f0 = class_scores(cm.tn, cm.fn, cm.fp)
    area = None
    if scores is not None and 0 < cm.tp + cm.fn < cm.total:
        area = auc(roc_curve(y_true, scores))
    return MetricSet(acc, mp, mr, mf, mae, mse, rmse, area, float(r0),
                     (float(p0), float(p1)), (float(r0), float(r1)), (float(f0), float(f1)))
