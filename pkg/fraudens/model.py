# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# model - Implements the TrainedModel superclass shared by all base learners
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
# 17-Oct-26 Registry of subclasses for from_dict() by kind tag
# -----------------------------------------------------------------------------

from typing import Dict, Type

import numpy as np

from fraudens.docenum import DocStrEnum
from fraudens.exceptions import DimensionMismatchException, ModelFormatException

class ModelKind(DocStrEnum):
    """The base learner families combined by the ensemble, in ensemble order"""
    DT  = "dt", "CART decision tree"
    RF  = "rf", "Random forest of CART trees"
    KNN = "knn", "k nearest neighbours, Euclidean distance"
    MLP = "mlp", "Multilayer perceptron, ReLU hidden layers and logistic output"

BASE_KINDS = (ModelKind.DT, ModelKind.RF, ModelKind.KNN, ModelKind.MLP)
"""Fixed order of the four base models inside ensemble weight vectors"""

def sigmoid(z: np.ndarray) -> np.ndarray:
    """Logistic function, evaluated without overflow for large ``|z|``"""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out

def binary_cross_entropy(z: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy of labels ``y`` given logits ``z``

    Computed as ``log(1 + exp(z)) - y * z`` so that saturated logits
    never produce ``log(0)``.

    """
    z = np.asarray(z, dtype=np.float64)
    return float(np.mean(np.logaddexp(0.0, z) - y * z))

class TrainedModel:
    """Common interface of every fitted base learner.

    A fitted model is immutable and can be shared between threads for
    prediction. Subclasses set :attr:`kind` and implement
    :meth:`_predict_proba`, :meth:`_to_dict` and :meth:`_from_dict`.

    Attributes:
        n_features: Feature count the model was fitted on.

    """
    kind: ModelKind = None
    _registry: Dict[str, Type["TrainedModel"]] = {}

    def __init__(
        self,
        n_features: int
    ):
        self.n_features = int(n_features)

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.kind is not None:
            TrainedModel._registry[cls.kind.value] = cls

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Probability of class 1 for every row of ``X``

        Raises:
            DimensionMismatchException: Column count differs from the fit.

        """
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatchException(
                f"{self.kind} model was fitted on {self.n_features} features, got shape {X.shape}")
        if X.shape[0] == 0:
            return np.zeros(0)
        return self._predict_proba(X)

    def to_dict(self) -> dict:
        """Serializable form for the saved model document"""
        d = {"kind": self.kind.value, "n_features": self.n_features}
        d.update(self._to_dict())
        return d

    @staticmethod
    def from_dict(d: dict) -> "TrainedModel":
        """Rebuild any model from :meth:`to_dict` output, dispatching on ``kind``

        Raises:
            ModelFormatException: Unknown kind or malformed record.

        """
        try:
            cls = TrainedModel._registry[d["kind"]]
            return cls._from_dict(d)
        except (KeyError, TypeError, ValueError) as ex:
            raise ModelFormatException(f"Malformed model record: {ex!r}") from ex

    # ----------------
    # SUBCLASS HOOKS
    # ----------------

    def _predict_proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _to_dict(self) -> dict:
        raise NotImplementedError

    @classmethod
    def _from_dict(cls, d: dict) -> "TrainedModel":
        raise NotImplementedError
