# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# synthetic - Seeded two-class datasets for smoke runs and tests
#
# Part of the fraudens hybrid ensemble fraud detection package
#
# Python Compatibility: Requires Python 3.8 or later
#
# -----------------------------------------------------------------------------
# MIT License - see LICENSE.txt
# -----------------------------------------------------------------------------
# Edit History:
# 17-Oct-26 Initial edit
# -----------------------------------------------------------------------------

from typing import Tuple

import numpy as np

from fraudens.dataset import Dataset
from fraudens.exceptions import InvalidValueException
from fraudens.seeding import make_rng

SEPARABLE_DISTANCE = 24.0
"""Centre distance, in standard deviations, of the separable bundled set"""

OVERLAPPING_SEPARATION = 1.0
"""Per-axis centre offset of the bundled set when not separable"""

def make_blobs(
        n_per_class: Tuple[int, int],
        n_features: int = 2,
        separation: float = 4.0,
        seed: int = 0) -> Dataset:
    """Two isotropic unit-variance Gaussian clusters.

    Class 0 is centred at ``-separation / 2`` and class 1 at
    ``+separation / 2`` on every axis. Rows are shuffled.

    Args:
        n_per_class: (class 0 count, class 1 count).
        n_features: Dimensions, positive.
        separation: Per-axis distance between the centres.
        seed: Generator seed.

    """
    n0, n1 = (int(n) for n in n_per_class)
    if n0 < 0 or n1 < 0 or n0 + n1 == 0:
        raise InvalidValueException(f"Class counts must be non-negative and not both 0, got {n_per_class}")
    if n_features < 1:
        raise InvalidValueException(f"n_features must be positive, got {n_features}")
    rng = make_rng(seed, "blobs")
    half = separation / 2.0
    X = np.vstack([rng.normal(-half, 1.0, (n0, n_features)), rng.normal(half, 1.0, (n1, n_features))])
    y = np.r_[np.zeros(n0, dtype=np.int64), np.ones(n1, dtype=np.int64)]
    order = rng.permutation(n0 + n1)
    return Dataset(X[order], y[order], tuple(f"V{j + 1}" for j in range(n_features)))

def make_imbalanced(
        seed: int,
        n_majority: int = 1000,
        n_minority: int = 50,
        n_features: int = 8,
        separable: bool = False) -> Dataset:
    """The bundled imbalanced set: ``n_majority`` normal and ``n_minority`` fraud rows.

    With ``separable`` the centres are :data:`SEPARABLE_DISTANCE` standard
    deviations apart, so every reasonable classifier is exact; otherwise the
    clusters overlap.

    """
    if separable:
        separation = SEPARABLE_DISTANCE / np.sqrt(n_features)
    else:
        separation = OVERLAPPING_SEPARATION
    return make_blobs((n_majority, n_minority), n_features, separation, seed)

def make_symmetric_pair(
        n_per_class: int = 20,
        n_features: int = 2,
        separation: float = 2.0,
        seed: int = 0) -> Dataset:
    """Two mirror image clusters: every class 1 row is a class 0 row negated.

    Swapping the labels of this set gives the same set reflected through
    the origin.

    """
    if n_per_class < 1:
        raise InvalidValueException(f"n_per_class must be positive, got {n_per_class}")
    rng = make_rng(seed, "symmetric")
    A = rng.normal(-separation / 2.0, 1.0, (n_per_class, n_features))
    X = np.vstack([A, -A])
    y = np.r_[np.zeros(n_per_class, dtype=np.int64), np.ones(n_per_class, dtype=np.int64)]
    return Dataset(X, y, tuple(f"V{j + 1}" for j in range(n_features)))
