# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# classifiers - One train / predict-probability contract over the base learners
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
# 17-Oct-26 Reject decision thresholds outside (0, 1)
# -----------------------------------------------------------------------------
"""Base learners of the ensemble behind a single contract.

The four learners live in their own modules (:mod:`fraudens.tree`,
:mod:`fraudens.knn`, :mod:`fraudens.mlp`) and all subclass
:class:`~fraudens.model.TrainedModel`. This module gathers their
hyperparameters and dispatches training by :class:`~fraudens.model.ModelKind`.

Cost per model, for n training samples, m features, k neighbours, t trees,
l tree nodes and e parameters per tree or network:

    ========  ===================  ==========
    Model     Training time        Space
    ========  ===================  ==========
    DT        O(m * n^2)           O(l)
    RF        O(t * log(n))        O(e * t)
    KNN       O(n * m * k)         O(n * m)
    MLP       O(n^2)               O(e * t)
    Ensemble  N x max of the above N x max
    ========  ===================  ==========

These are the published estimates for the method and are not enforced.
The tree figures assume a bounded number of distinct split points; the
implementation sorts at every node, O(m * n log n) per level.

"""

from dataclasses import dataclass, field, replace
from typing import Dict, Union

import numpy as np

from fraudens.exceptions import InvalidValueException
from fraudens.knn import KNNModel, KNNParams, train_knn
from fraudens.mlp import MLPModel, MLPParams, mlp_loss_and_gradients, train_mlp
from fraudens.model import BASE_KINDS, ModelKind, TrainedModel
from fraudens.seeding import derive_seed
from fraudens.tree import (DecisionTreeModel, DTParams, RandomForestModel,
                           RFParams, gini, train_decision_tree,
                           train_random_forest)

__all__ = [
    "BASE_KINDS", "ModelKind", "TrainedModel", "DecisionTreeModel", "RandomForestModel",
    "KNNModel", "MLPModel", "DTParams", "RFParams", "KNNParams", "MLPParams", "ModelParams",
    "train_decision_tree", "train_random_forest", "train_knn", "train_mlp", "train_model",
    "predict_proba", "predict", "gini", "mlp_loss_and_gradients",
]

Params = Union[DTParams, RFParams, KNNParams, MLPParams]

@dataclass(frozen=True)
class ModelParams:
    """Hyperparameters of all four base learners, with the pipeline defaults"""
    dt: DTParams = field(default_factory=DTParams)
    rf: RFParams = field(default_factory=RFParams)
    knn: KNNParams = field(default_factory=KNNParams)
    mlp: MLPParams = field(default_factory=MLPParams)

    def for_kind(self, kind: ModelKind) -> Params:
        return getattr(self, ModelKind(kind).value)

    def seeded(self, seed: int, threads: Union[int, None] = None) -> "ModelParams":
        """Copy with every learner's seed derived from ``seed`` and its kind"""
        return ModelParams(
            dt=replace(self.dt, seed=derive_seed(seed, "dt")),
            rf=replace(self.rf, seed=derive_seed(seed, "rf"), threads=threads),
            knn=self.knn,
            mlp=replace(self.mlp, seed=derive_seed(seed, "mlp")))

    def to_dict(self) -> Dict[str, dict]:
        out = {}
        for kind in BASE_KINDS:
            p = self.for_kind(kind).__dict__.copy()
            p.pop("threads", None)
            if "hidden_layers" in p:
                p["hidden_layers"] = list(p["hidden_layers"])
            out[kind.value] = p
        return out

_TRAINERS = {
    ModelKind.DT: train_decision_tree,
    ModelKind.RF: train_random_forest,
    ModelKind.KNN: train_knn,
    ModelKind.MLP: train_mlp,
}

def train_model(kind: ModelKind, X: np.ndarray, y: np.ndarray, params: Params) -> TrainedModel:
    """Train the learner named by ``kind``

    Example:
        ``train_model(ModelKind.KNN, X, y, KNNParams(k=3))``

    """
    return _TRAINERS[ModelKind(kind)](X, y, params)

def predict_proba(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    """P(class 1) for every row, each in [0, 1].

    DT gives the class 1 fraction of the leaf reached, RF the mean over its
    trees, KNN the class 1 fraction among the ``k`` nearest stored rows and
    MLP the logistic output.

    Raises:
        DimensionMismatchException: Column count differs from the fit.

    """
    return model.predict_proba(X)

def predict(model: TrainedModel, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Hard labels: 1 where P(class 1) is at least ``threshold``

    Raises:
        InvalidValueException: ``threshold`` is not strictly between 0 and 1.

    """
    if not 0.0 < threshold < 1.0:
        raise InvalidValueException(f"threshold must be in (0, 1), got {threshold}")
    return (predict_proba(model, X) >= threshold).astype(np.int64)
