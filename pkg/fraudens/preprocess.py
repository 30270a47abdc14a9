# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# preprocess - Standardization and label encoding
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

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from fraudens.exceptions import (DimensionMismatchException,
                                 EmptyDatasetException, InvalidValueException,
                                 UnseenLabelException)

@dataclass(frozen=True, eq=False)
class ScalerParams:
    """Fitted standardization state, one entry per feature column.

    Attributes:
        means: Column means of the fitting data.
        stds: Population (divide by n) standard deviations. Exactly 0.0 for
            constant columns.
        n_fitted: Number of rows the parameters were fitted on.

    """
    means: np.ndarray
    stds: np.ndarray
    n_fitted: int

    def __post_init__(self):
        means = np.asarray(self.means, dtype=np.float64)
        stds = np.asarray(self.stds, dtype=np.float64)
        if means.shape != stds.shape or means.ndim != 1:
            raise DimensionMismatchException(f"{means.shape} means vs {stds.shape} standard deviations")
        if np.any(stds < 0):
            raise InvalidValueException("Standard deviations must be non-negative")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)

    @property
    def n_features(self) -> int:
        return self.means.shape[0]

    def to_dict(self) -> dict:
        return {"means": self.means.tolist(), "stds": self.stds.tolist(), "n_fitted": int(self.n_fitted)}

    @classmethod
    def from_dict(cls, d: dict) -> "ScalerParams":
        return cls(np.array(d["means"], dtype=np.float64), np.array(d["stds"], dtype=np.float64), int(d["n_fitted"]))

class LabelMap(Mapping):
    """Ordered, injective mapping of category text to codes 0..k-1

    Behaves as a read-only ``dict``; iteration follows code order.

    """
    def __init__(
        self,
        categories: Sequence[str]
    ):
        """Initialize from the categories in code order.

        Args:
            categories: ``categories[c]`` receives code ``c``.

        Raises:
            InvalidValueException: If a category repeats.

        """
        cats = [str(c) for c in categories]
        if len(set(cats)) != len(cats):
            raise InvalidValueException(f"Label categories are not unique: {cats}")
        self._categories: Tuple[str, ...] = tuple(cats)
        self._codes: Dict[str, int] = {c: i for i, c in enumerate(cats)}

    @classmethod
    def identity(cls) -> "LabelMap":
        """The map for numeric 0/1 labels, ``{"0": 0, "1": 1}``"""
        return cls(["0", "1"])

    def __getitem__(self, key: str) -> int:
        return self._codes[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._categories)

    def __len__(self) -> int:
        return len(self._categories)

    def __repr__(self) -> str:
        return f"LabelMap({dict(self._codes)})"

    @property
    def categories(self) -> Tuple[str, ...]:
        return self._categories

    def decode(self, code: int) -> str:
        """The category text for ``code``"""
        if not 0 <= code < len(self._categories):
            raise UnseenLabelException(str(code))
        return self._categories[code]

    def to_dict(self) -> dict:
        return {"categories": list(self._categories)}

    @classmethod
    def from_dict(cls, d: dict) -> "LabelMap":
        return cls(d["categories"])

def fit_scaler(features: np.ndarray) -> ScalerParams:
    """Fit per column mean and population standard deviation.

    Args:
        features: n_samples x n_features, finite.

    Raises:
        EmptyDatasetException: No rows or no columns.
        InvalidValueException: A value is not finite.

    Example:
        A column ``[1, 2, 3]`` fits mean 2.0 and std sqrt(2/3) = 0.816497.

    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise EmptyDatasetException("Cannot fit a scaler on an empty matrix")
    if not np.all(np.isfinite(X)):
        raise InvalidValueException("Cannot fit a scaler on non-finite values")
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds[np.ptp(X, axis=0) == 0] = 0.0        # exact zero for constant columns
    return ScalerParams(means, stds, X.shape[0])

def transform(params: ScalerParams, features: np.ndarray) -> np.ndarray:
    """Standardize: ``(x - mean) / std`` per column; 0 where std is 0.

    Raises:
        DimensionMismatchException: Column count differs from the fit.

    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != params.n_features:
        raise DimensionMismatchException(
            f"Scaler was fitted on {params.n_features} features, got shape {X.shape}")
    centered = X - params.means
    out = np.zeros_like(centered)
    np.divide(centered, params.stds, out=out, where=params.stds > 0)
    return out

def fit_transform(features: np.ndarray) -> Tuple[ScalerParams, np.ndarray]:
    """:func:`fit_scaler` then :func:`transform` on the same matrix"""
    params = fit_scaler(features)
    return params, transform(params, features)

_NORMAL_FRAUD = ("normal", "fraudulent")

def encode_labels(raw_labels: Sequence[str]) -> Tuple[np.ndarray, LabelMap]:
    """Assign integer codes to label text.

    Codes follow first appearance, except that a label set of exactly
    ``normal`` and ``fraudulent`` (any case) always maps normal to 0 and
    fraudulent to 1.

    Args:
        raw_labels: Label text, one per sample.

    Returns:
        (codes as an int64 vector, the map)

    Raises:
        EmptyDatasetException: If ``raw_labels`` is empty.

    Example:
        ``["b", "a", "b", "c"]`` encodes to ``[0, 1, 0, 2]``.

    """
    labels: List[str] = [str(v) for v in raw_labels]
    if not labels:
        raise EmptyDatasetException("No labels to encode")
    order = list(dict.fromkeys(labels))
    lowered = {c.lower(): c for c in order}
    if len(order) == 2 and set(lowered) == set(_NORMAL_FRAUD):
        order = [lowered[name] for name in _NORMAL_FRAUD]
    label_map = LabelMap(order)
    codes = np.fromiter((label_map[v] for v in labels), dtype=np.int64, count=len(labels))
    return codes, label_map

def decode_labels(codes: Sequence[int], label_map: LabelMap) -> List[str]:
    """Inverse of :func:`encode_labels`"""
    return [label_map.decode(int(c)) for c in codes]
