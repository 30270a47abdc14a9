# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# knn - Implements the k nearest neighbours base learner
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
# -----------------------------------------------------------------------------

from dataclasses import dataclass

import numpy as np

from fraudens.exceptions import (DimensionMismatchException,
                                 EmptyDatasetException, InvalidValueException)
from fraudens.model import ModelKind, TrainedModel

_CHUNK_CELLS = 1 << 22      # query x stored x feature cells per distance block

@dataclass(frozen=True)
class KNNParams:
    """k nearest neighbours hyperparameters.

    Attributes:
        k: Neighbours consulted, positive and odd.
        distance: Only ``"euclidean"`` is supported.

    """
    k: int = 5
    distance: str = "euclidean"

    def __post_init__(self):
        if self.k < 1 or self.k % 2 == 0:
            raise InvalidValueException(f"k must be a positive odd integer, got {self.k}")
        if self.distance != "euclidean":
            raise InvalidValueException(f"Unsupported distance '{self.distance}'")

class KNNModel(TrainedModel):
    """Stored training set; prediction does all the work.

    P(class 1) is the fraction of class 1 among the ``k`` stored rows
    nearest in Euclidean distance. Equal distances go to the lower stored
    index.

    """
    kind = ModelKind.KNN

    def __init__(
        self,
        X: np.ndarray,
        y: np.ndarray,
        k: int
    ):
        X = np.asarray(X, dtype=np.float64)
        super().__init__(X.shape[1])
        self.X = X
        self.y = np.asarray(y).astype(np.int64)
        self.k = int(k)

    def neighbours(self, X: np.ndarray) -> np.ndarray:
        """Indices of the ``k`` nearest stored rows for every query row, nearest first"""
        X = np.asarray(X, dtype=np.float64)
        n_stored, d = self.X.shape
        chunk = max(1, _CHUNK_CELLS // max(1, n_stored * d))
        out = np.empty((X.shape[0], self.k), dtype=np.int64)
        for start in range(0, X.shape[0], chunk):
            q = X[start:start + chunk]
            diff = q[:, None, :] - self.X[None, :, :]
            dist2 = np.einsum("qnd,qnd->qn", diff, diff)
            out[start:start + chunk] = np.argsort(dist2, axis=1, kind="stable")[:, :self.k]
        return out

    def _predict_proba(self, X: np.ndarray) -> np.ndarray:
        return self.y[self.neighbours(X)].mean(axis=1)

    def _to_dict(self) -> dict:
        return {"k": self.k, "X": self.X.tolist(), "y": self.y.tolist()}

    @classmethod
    def _from_dict(cls, d: dict) -> "KNNModel":
        X = np.array(d["X"], dtype=np.float64).reshape(-1, int(d["n_features"]))
        return cls(X, np.array(d["y"], dtype=np.int64), int(d["k"]))

def train_knn(X: np.ndarray, y: np.ndarray, params: KNNParams = KNNParams()) -> KNNModel:
    """Store the training set for neighbour lookup.

    Raises:
        EmptyDatasetException: ``X`` has no rows or columns.
        InvalidValueException: ``k`` exceeds the number of samples.

    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise EmptyDatasetException(f"Cannot train on an empty matrix (shape {X.shape})")
    if y.shape != (X.shape[0],):
        raise DimensionMismatchException(f"X shape {X.shape} does not match y shape {y.shape}")
    if params.k > X.shape[0]:
        raise InvalidValueException(f"k={params.k} exceeds the {X.shape[0]} training samples")
    return KNNModel(X.copy(), y.copy(), params.k)
