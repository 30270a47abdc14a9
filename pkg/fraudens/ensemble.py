# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# ensemble - Weighted soft voting over the base learners and its weight search
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
# 17-Oct-26 Score every grid point in one pass over precomputed probabilities
# 17-Oct-26 Grid table written through pandas
# -----------------------------------------------------------------------------

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from fraudens.dataset import write_frame
from fraudens.docenum import DocStrEnum
from fraudens.exceptions import (DimensionMismatchException,
                                 EmptyDatasetException, InvalidValueException)
from fraudens.metrics import macro_scores
from fraudens.model import BASE_KINDS, TrainedModel

logger = logging.getLogger(__name__)

_CHUNK_CELLS = 1 << 22      # combinations x samples per scoring block

class SelectionMetric(DocStrEnum):
    """Validation score maximized by the weight search"""
    ACCURACY = "accuracy", "Fraction of validation samples classified correctly"
    MACRO_F1 = "macro_f1", "Unweighted mean of the two per-class F1 scores"

class WeightSelection(DocStrEnum):
    """Where cross-validation takes the ensemble weights from"""
    ONCE = "once", "Search on the first fold's inner validation split, then reuse for every fold"
    PER_FOLD = "per_fold", "Search again on every fold's inner validation split"

@dataclass(frozen=True)
class EnsembleWeights:
    """Soft voting weights in (DT, RF, KNN, MLP) order.

    Attributes:
        values: Four finite, non-negative reals, at least one positive.

    Raises:
        InvalidValueException: If the values break the rules above.

    """
    values: Tuple[float, float, float, float]

    def __post_init__(self):
        v = tuple(float(w) for w in self.values)
        if len(v) != len(BASE_KINDS):
            raise InvalidValueException(f"Expected {len(BASE_KINDS)} weights, got {len(v)}")
        if not all(np.isfinite(w) and w >= 0 for w in v):
            raise InvalidValueException(f"Weights must be finite and non-negative, got {v}")
        if not any(w > 0 for w in v):
            raise InvalidValueException("At least one weight must be positive")
        object.__setattr__(self, "values", v)

    @classmethod
    def equal(cls) -> "EnsembleWeights":
        return cls((0.25, 0.25, 0.25, 0.25))

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    def to_dict(self) -> dict:
        return {kind.value: w for kind, w in zip(BASE_KINDS, self.values)}

    @classmethod
    def from_dict(cls, d: dict) -> "EnsembleWeights":
        return cls(tuple(d[kind.value] for kind in BASE_KINDS))

@dataclass(frozen=True)
class WeightGrid:
    """Candidate weights for the exhaustive search.

    Every model draws its weight from the same ``values``; the search
    covers the Cartesian product except the all-zero vector.

    Attributes:
        values: Candidate weights, non-negative and finite. Stored sorted
            and without repeats.
        metric: Score that picks the winner.

    """
    values: Tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    metric: SelectionMetric = SelectionMetric.MACRO_F1

    def __post_init__(self):
        v = tuple(sorted(set(float(w) for w in self.values)))
        if not v:
            raise InvalidValueException("Weight grid needs at least one candidate value")
        if not all(np.isfinite(w) and w >= 0 for w in v):
            raise InvalidValueException(f"Grid values must be finite and non-negative, got {v}")
        if v[-1] == 0:
            raise InvalidValueException("Weight grid has no positive candidate")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "metric", SelectionMetric(self.metric))

    def combinations(self) -> np.ndarray:
        """All candidate weight vectors, one per row, in lexicographic order"""
        grid = np.array(list(itertools.product(self.values, repeat=len(BASE_KINDS))))
        return grid[grid.sum(axis=1) > 0]

    @property
    def n_combinations(self) -> int:
        n = len(self.values) ** len(BASE_KINDS)
        return n - 1 if self.values[0] == 0 else n

@dataclass(frozen=True, eq=False)
class GridSearchResult:
    """Outcome of :func:`search_weight_grid`

    Attributes:
        weights: The winning weights.
        score: Its selection metric value.
        accuracy: Its accuracy.
        combinations: Every weight vector tried, one per row.
        scores: Selection metric of each row of ``combinations``.
        accuracies: Accuracy of each row of ``combinations``.
        metric: The selection metric.
        baseline_score: Selection metric of equal weights.

    """
    weights: EnsembleWeights
    score: float
    accuracy: float
    combinations: np.ndarray
    scores: np.ndarray
    accuracies: np.ndarray
    metric: SelectionMetric = SelectionMetric.MACRO_F1
    baseline_score: float = field(default=float("nan"))

def _as_weight_array(weights: Union[EnsembleWeights, Sequence[float]]) -> np.ndarray:
    w = np.asarray(tuple(weights), dtype=np.float64)
    if w.shape != (len(BASE_KINDS),):
        raise InvalidValueException(f"Expected {len(BASE_KINDS)} weights, got {w.shape[0]}")
    return w

def normalize_weights(weights: Union[EnsembleWeights, Sequence[float]]) -> Tuple[float, ...]:
    """Weights scaled to sum to 1; predictions do not change

    Raises:
        InvalidValueException: All weights are zero.

    """
    w = _as_weight_array(weights)
    total = w.sum()
    if not total > 0:
        raise InvalidValueException("Cannot normalize all-zero weights")
    return tuple(float(v) for v in w / total)

def base_probabilities(models: Sequence[TrainedModel], X: np.ndarray) -> np.ndarray:
    """Stack the four models' P(class 1) on ``X`` into a ``4 x n`` array

    Raises:
        InvalidValueException: Models are missing or out of (DT, RF, KNN, MLP) order.

    """
    if tuple(m.kind for m in models) != BASE_KINDS:
        raise InvalidValueException(
            f"Expected models in order {[k.value for k in BASE_KINDS]}, got {[str(m.kind) for m in models]}")
    return np.vstack([m.predict_proba(X) for m in models])

def combine_probabilities(base_probs: np.ndarray, weights: Union[EnsembleWeights, Sequence[float]]) -> np.ndarray:
    """Weighted average of precomputed base probabilities, ``sum(w_i p_i) / sum(w_i)``"""
    w = _as_weight_array(weights)
    total = w.sum()
    if not total > 0:
        raise InvalidValueException("Ensemble weights are all zero")
    base_probs = np.asarray(base_probs, dtype=np.float64)
    if base_probs.ndim != 2 or base_probs.shape[0] != w.shape[0]:
        raise DimensionMismatchException(f"Expected {w.shape[0]} rows of probabilities, got shape {base_probs.shape}")
    return (w @ base_probs) / total

def ensemble_predict_proba(
        models: Sequence[TrainedModel],
        weights: Union[EnsembleWeights, Sequence[float]],
        X: np.ndarray) -> np.ndarray:
    """Soft vote: the weighted average of the four models' P(class 1).

    Example:
        Base probabilities (0.9, 0.8, 0.6, 0.7) under weights
        (0.25, 0.5, 0.5, 0.25) combine to 1.1 / 1.5 = 0.733333.

    Raises:
        InvalidValueException: All weights are zero.
        DimensionMismatchException: ``X`` does not match the models.

    """
    return combine_probabilities(base_probabilities(models, X), weights)

def _score_combinations(W: np.ndarray, base_probs: np.ndarray, y: np.ndarray,
                        metric: SelectionMetric, threshold: float) -> Tuple[np.ndarray, np.ndarray]:
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = y.shape[0] - n_pos
    scores = np.empty(W.shape[0])
    accs = np.empty(W.shape[0])
    chunk = max(1, _CHUNK_CELLS // max(1, y.shape[0]))
    for start in range(0, W.shape[0], chunk):
        w = W[start:start + chunk]
        pred = (w @ base_probs) / w.sum(axis=1, keepdims=True) >= threshold
        tp = pred[:, pos].sum(axis=1)
        fp = pred[:, ~pos].sum(axis=1)
        acc, _, _, f1 = macro_scores(tp, fp, n_pos - tp, n_neg - fp)
        accs[start:start + chunk] = acc
        scores[start:start + chunk] = acc if metric == SelectionMetric.ACCURACY else f1
    return scores, accs

def search_weight_grid(
        base_probs: np.ndarray,
        y_val: Sequence[int],
        grid: WeightGrid = WeightGrid(),
        threshold: float = 0.5) -> GridSearchResult:
    """Exhaustive weight search over precomputed validation probabilities.

    Every combination in ``grid`` is scored at ``threshold``. The winner
    has the highest selection metric, then the highest accuracy, then the
    lexicographically smallest weight vector.

    Args:
        base_probs: ``4 x n`` P(class 1) of DT, RF, KNN and MLP.
        y_val: The ``n`` validation labels.
        grid: Candidate values and selection metric.
        threshold: Decision threshold for the hard labels.

    Raises:
        EmptyDatasetException: No validation samples.

    """
    y = np.asarray(y_val).astype(np.int64)
    base_probs = np.asarray(base_probs, dtype=np.float64)
    if y.shape[0] == 0:
        raise EmptyDatasetException("Weight search needs a non-empty validation set")
    if base_probs.shape != (len(BASE_KINDS), y.shape[0]):
        raise DimensionMismatchException(
            f"Expected {len(BASE_KINDS)} x {y.shape[0]} probabilities, got shape {base_probs.shape}")
    W = grid.combinations()
    scores, accs = _score_combinations(W, base_probs, y, grid.metric, threshold)
    # combinations are in lexicographic order, so the first maximizer wins ties
    best_score = scores.max()
    tied = np.flatnonzero(scores == best_score)
    best = tied[np.argmax(accs[tied])]
    baseline, _ = _score_combinations(np.ones((1, len(BASE_KINDS))), base_probs, y, grid.metric, threshold)
    result = GridSearchResult(EnsembleWeights(tuple(W[best])), float(scores[best]), float(accs[best]),
                              W, scores, accs, grid.metric, float(baseline[0]))
    logger.debug("stage=grid combinations=%d metric=%s best=%s score=%.6f baseline=%.6f",
                 W.shape[0], grid.metric, list(result.weights), result.score, result.baseline_score)
    return result

def grid_search_weights(
        models: Sequence[TrainedModel],
        X_val: np.ndarray,
        y_val: Sequence[int],
        grid: WeightGrid = WeightGrid()) -> Tuple[EnsembleWeights, float]:
    """Pick ensemble weights on a validation set

    Each model predicts ``X_val`` once; see :func:`search_weight_grid`
    for the scoring and tie rules.

    Returns:
        (winning weights, their validation score)

    Raises:
        EmptyDatasetException: No validation samples.

    """
    X_val = np.asarray(X_val, dtype=np.float64)
    if X_val.ndim != 2 or X_val.shape[0] == 0:
        raise EmptyDatasetException("Weight search needs a non-empty validation set")
    result = search_weight_grid(base_probabilities(models, X_val), y_val, grid)
    return result.weights, result.score

def write_grid_table(result: GridSearchResult, path: Union[str, Path]) -> None:
    """Write every scored combination as CSV ``w_dt,w_rf,w_knn,w_mlp,metric,accuracy``"""
    frame = pd.DataFrame(np.asarray(result.combinations, dtype=np.float64),
                         columns=[f"w_{k.value}" for k in BASE_KINDS])
    frame["metric"] = np.asarray(result.scores, dtype=np.float64)
    frame["accuracy"] = np.asarray(result.accuracies, dtype=np.float64)
    write_frame(frame, path)
