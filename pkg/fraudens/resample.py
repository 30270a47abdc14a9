# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# resample - Logistic regression and Instance Hardness Threshold undersampling
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
# 17-Oct-26 Remove the hardest majority samples by rank, not by cutoff
# -----------------------------------------------------------------------------

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple

import numpy as np

from fraudens.dataset import Dataset
from fraudens.exceptions import (DimensionMismatchException,
                                 DivergenceException, InvalidValueException,
                                 SingleClassException)
from fraudens.folds import stratified_kfold
from fraudens.model import binary_cross_entropy, sigmoid
from fraudens.preprocess import fit_transform
from fraudens.seeding import derive_seed

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class LogisticConfig:
    """Training settings of the hardness estimator.

    Attributes:
        learning_rate: Gradient descent step, positive.
        epochs: Full-batch steps, 0 or more.
        l2: Penalty ``l2 / 2 * |w|^2`` on the weights (not the bias).
        seed: Recorded with the model. Training starts from zero and is
            deterministic, so the seed does not change the result.

    """
    learning_rate: float = 0.1
    epochs: int = 300
    l2: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise InvalidValueException(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 0:
            raise InvalidValueException(f"epochs must be 0 or more, got {self.epochs}")
        if self.l2 < 0:
            raise InvalidValueException(f"l2 must be non-negative, got {self.l2}")

@dataclass(frozen=True, eq=False)
class LogisticModel:
    """Fitted logistic regression.

    Attributes:
        weights: One weight per feature.
        bias: Intercept.
        training_config: Settings it was trained with.
        loss_history: Objective value before every update, then the final
            value (``epochs + 1`` entries).

    """
    weights: np.ndarray
    bias: float
    training_config: LogisticConfig
    loss_history: Tuple[float, ...] = field(default=())

    @property
    def n_features(self) -> int:
        return self.weights.shape[0]

@dataclass(frozen=True)
class ResampleConfig:
    """IHT undersampling settings.

    Attributes:
        target_ratio: Minority to majority ratio after resampling, in (0, 1].
            The majority class is cut to ``round(minority / target_ratio)``.
        cv_folds: Folds used for out-of-fold hardness, at least 2 and at
            most the minority count.
        logistic: Settings of the logistic regression hardness estimator.
        seed: Seed for the hardness fold plan.
        threads: Worker threads for the per-fold fits; ``None`` lets the
            executor choose.

    """
    target_ratio: float = 1.0
    cv_folds: int = 5
    logistic: LogisticConfig = field(default_factory=LogisticConfig)
    seed: int = 0
    threads: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.target_ratio <= 1.0:
            raise InvalidValueException(f"target_ratio must be in (0, 1], got {self.target_ratio}")
        if self.cv_folds < 2:
            raise InvalidValueException(f"cv_folds must be at least 2, got {self.cv_folds}")

@dataclass(frozen=True, eq=False)
class HardnessScores:
    """Out-of-fold instance hardness.

    Attributes:
        scores: ``1 - P(true class)`` per sample, each in [0, 1].
        fold_assignment: Fold that scored each sample.

    """
    scores: np.ndarray
    fold_assignment: np.ndarray

@dataclass(frozen=True, eq=False)
class UndersampleResult:
    """Outcome of :func:`iht_undersample`

    Unpacks as ``X, y, kept_indices = iht_undersample(...)``.

    Attributes:
        X: Rows kept, in original order.
        y: Their labels.
        kept_indices: Strictly increasing indices into the input.
        removed_indices: Majority samples dropped, hardest first.
        hardness: Scores of every input sample, or ``None`` when nothing
            needed removing.

    """
    X: np.ndarray
    y: np.ndarray
    kept_indices: np.ndarray
    removed_indices: np.ndarray
    hardness: Optional[HardnessScores]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter((self.X, self.y, self.kept_indices))

def _check_xy(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise DimensionMismatchException(f"X shape {X.shape} does not match y shape {y.shape}")
    return X, y

def logistic_loss_and_gradient(
        weights: np.ndarray,
        bias: float,
        X: np.ndarray,
        y: np.ndarray,
        l2: float) -> Tuple[float, np.ndarray, float]:
    """Objective minimized by :func:`fit_logistic` and its gradient.

    The objective is mean binary cross-entropy plus ``l2 / 2 * |w|^2``.

    Returns:
        (loss, gradient w.r.t. weights, gradient w.r.t. bias)

    """
    z = X @ weights + bias
    loss = binary_cross_entropy(z, y) + 0.5 * l2 * float(weights @ weights)
    residual = sigmoid(z) - y
    grad_w = X.T @ residual / X.shape[0] + l2 * weights
    grad_b = float(residual.mean())
    return loss, grad_w, grad_b

def fit_logistic(X: np.ndarray, y: np.ndarray, config: LogisticConfig = LogisticConfig()) -> LogisticModel:
    """Fit logistic regression by full-batch gradient descent from zero.

    Args:
        X: Standardized features.
        y: 0/1 labels; both classes must be present.
        config: Learning rate, epochs and penalty.

    Raises:
        SingleClassException: Only one class in ``y``.
        DivergenceException: The loss became non-finite.

    """
    X, y = _check_xy(X, y)
    if np.unique(y).shape[0] < 2:
        raise SingleClassException("Logistic regression needs both classes in the training data")
    w = np.zeros(X.shape[1])
    b = 0.0
    history = []
    for epoch in range(config.epochs):
        loss, grad_w, grad_b = logistic_loss_and_gradient(w, b, X, y, config.l2)
        if not np.isfinite(loss):
            raise DivergenceException("logistic regression", epoch, loss)
        history.append(loss)
        w = w - config.learning_rate * grad_w
        b = b - config.learning_rate * grad_b
    final_loss = logistic_loss_and_gradient(w, b, X, y, config.l2)[0]
    if not np.isfinite(final_loss) or not np.all(np.isfinite(w)):
        raise DivergenceException("logistic regression", config.epochs, final_loss)
    history.append(final_loss)
    return LogisticModel(w, float(b), config, tuple(history))

def predict_proba_logistic(model: LogisticModel, X: np.ndarray) -> np.ndarray:
    """``sigmoid(w . x + b)`` for every row of ``X``

    Raises:
        DimensionMismatchException: Column count differs from the fit.

    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DimensionMismatchException(
            f"Logistic model was fitted on {model.n_features} features, got shape {X.shape}")
    return sigmoid(X @ model.weights + model.bias)

def hardness_scores(X: np.ndarray, y: np.ndarray, config: ResampleConfig = ResampleConfig()) -> HardnessScores:
    """Instance hardness from out-of-fold logistic regression.

    The samples are split into ``config.cv_folds`` stratified folds. For each
    fold a model fitted on the other folds scores the held-out samples, and
    hardness is one minus the probability given to the sample's true class.

    Raises:
        SingleClassException: Only one class in ``y``.
        FoldConstructionException: More folds than minority samples.

    """
    X, yf = _check_xy(X, y)
    y = yf.astype(np.int64)
    if np.unique(y).shape[0] < 2:
        raise SingleClassException("Hardness needs both classes present")
    plan = stratified_kfold(y, config.cv_folds, derive_seed(config.seed, "hardness"))

    def score_fold(fold: int) -> Tuple[np.ndarray, np.ndarray]:
        train, test = plan.split(fold)
        lr_config = LogisticConfig(config.logistic.learning_rate, config.logistic.epochs,
                                   config.logistic.l2, derive_seed(config.seed, "hardness-fold", fold))
        model = fit_logistic(X[train], y[train], lr_config)
        z = X[test] @ model.weights + model.bias
        p_true = np.where(y[test] == 1, sigmoid(z), sigmoid(-z))
        return test, 1.0 - p_true

    scores = np.empty(y.shape[0])
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        for test, s in pool.map(score_fold, range(plan.k)):
            scores[test] = s
    return HardnessScores(np.clip(scores, 0.0, 1.0), plan.assignments)

def iht_undersample(X: np.ndarray, y: np.ndarray, config: ResampleConfig = ResampleConfig()) -> UndersampleResult:
    """Instance Hardness Threshold undersampling of the majority class.

    Every minority sample is kept. Majority samples are ranked by hardness,
    hardest first with ties going to the lower index, and removed from the
    top of that ranking until ``round(minority / target_ratio)`` remain.
    The majority is whichever class has more samples.

    Args:
        X: Standardized features.
        y: 0/1 labels.
        config: Ratio, hardness folds and estimator settings.

    Returns:
        See :class:`UndersampleResult`; unpacks as ``(X', y', kept_indices)``.

    Raises:
        SingleClassException: Only one class in ``y``.
        InvalidValueException: The target majority count is below 1.
        FoldConstructionException: More hardness folds than minority samples.

    """
    X, yf = _check_xy(X, y)
    y = yf.astype(np.int64)
    n1 = int(y.sum())
    n0 = y.shape[0] - n1
    if n0 == 0 or n1 == 0:
        raise SingleClassException("Undersampling needs both classes present")
    majority = 0 if n0 >= n1 else 1
    n_major, n_minor = max(n0, n1), min(n0, n1)
    target = int(np.floor(n_minor / config.target_ratio + 0.5))
    if target < 1:
        raise InvalidValueException(f"Target majority count {target} is below 1")
    all_idx = np.arange(y.shape[0])
    if n_major <= target:
        logger.info("stage=balance majority=%d minority=%d target=%d removed=0", n_major, n_minor, target)
        return UndersampleResult(X, y, all_idx, np.zeros(0, dtype=np.int64), None)
    hs = hardness_scores(X, y, config)
    major_idx = np.flatnonzero(y == majority)
    order = np.lexsort((major_idx, -hs.scores[major_idx]))
    removed = major_idx[order[:n_major - target]]
    kept = np.setdiff1d(all_idx, removed)
    logger.info("stage=balance majority=%d minority=%d target=%d removed=%d kept=%d",
                n_major, n_minor, target, removed.shape[0], kept.shape[0])
    return UndersampleResult(X[kept], y[kept], kept, removed, hs)

def balance_dataset(dataset: Dataset, config: ResampleConfig = ResampleConfig()) -> Tuple[Dataset, UndersampleResult]:
    """Undersample a raw dataset, scoring hardness on standardized features.

    The scaler is fitted on the whole input for the hardness estimator
    only; the returned dataset holds the kept rows unscaled, so later
    stages fit their own scaler.

    Returns:
        (kept rows as a :class:`~fraudens.dataset.Dataset`, undersampling detail)

    """
    _, Z = fit_transform(dataset.features)
    result = iht_undersample(Z, dataset.labels, config)
    return dataset.subset(result.kept_indices), result
