# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# folds - Stratified fold planning for cross-validation and hardness scoring
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
# 17-Oct-26 Class dealing order now follows the shuffled permutation so that
#           relabelling the classes never changes the plan
# -----------------------------------------------------------------------------

from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from fraudens.exceptions import FoldConstructionException, InvalidValueException
from fraudens.seeding import make_rng

@dataclass(frozen=True, eq=False)
class FoldPlan:
    """Assignment of every sample to one of ``k`` folds.

    Attributes:
        k: Number of folds.
        assignments: ``assignments[i]`` is the fold of sample ``i``.
        seed: Seed the plan was drawn with.

    """
    k: int
    assignments: np.ndarray
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        """Ascending indices of the samples held out in ``fold``"""
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        """Ascending indices of every sample not in ``fold``"""
        return np.flatnonzero(self.assignments != fold)

    def split(self, fold: int) -> Tuple[np.ndarray, np.ndarray]:
        """(train indices, test indices) for ``fold``"""
        return self.train_indices(fold), self.test_indices(fold)

    def splits(self) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
        """Yield (fold, train indices, test indices) in fold order"""
        for f in range(self.k):
            train, test = self.split(f)
            yield f, train, test

    def fold_sizes(self) -> List[int]:
        return np.bincount(self.assignments, minlength=self.k).tolist()

def _class_order(y: np.ndarray, perm: np.ndarray) -> List[int]:
    # classes in order of their first member in the permutation
    labels, first = np.unique(y[perm], return_index=True)
    return labels[np.argsort(first)].tolist()

def stratified_kfold(y: np.ndarray, k: int, seed: int) -> FoldPlan:
    """Stratified k-fold plan.

    A seeded permutation of all samples is taken; each class's members, in
    permutation order, are dealt round-robin to the folds, the next class
    continuing where the previous one stopped. Every fold then holds either
    ``floor`` or ``ceil`` of ``n_c / k`` members of each class ``c``, and
    fold sizes differ by at most one.

    Args:
        y: Class labels.
        k: Number of folds, at least 2.
        seed: Plan seed.

    Raises:
        InvalidValueException: ``k < 2``.
        FoldConstructionException: ``k`` exceeds the size of some class.

    Example:
        984 samples at 1:1 with ``k=10`` give folds of 98 or 99 samples, each
        holding 49 or 50 of class 1.

    """
    y = np.asarray(y).astype(np.int64)
    if k < 2:
        raise InvalidValueException(f"At least 2 folds are required, got {k}")
    labels, counts = np.unique(y, return_counts=True)
    for label, count in zip(labels, counts):
        if count < k:
            raise FoldConstructionException(
                f"Cannot build {k} stratified folds: class {label} has only {count} samples")
    perm = make_rng(seed, "kfold").permutation(y.shape[0])
    assignments = np.empty(y.shape[0], dtype=np.int64)
    offset = 0
    for label in _class_order(y, perm):
        members = perm[y[perm] == label]
        assignments[members] = (offset + np.arange(members.shape[0])) % k
        offset = (offset + members.shape[0]) % k
    return FoldPlan(k, assignments, seed)

def train_val_split(y: np.ndarray, fraction: float = 0.2, seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Stratified hold-out split.

    Each class contributes ``round(fraction * n_c)`` members to the
    validation part, at least one and never all of them.

    Returns:
        (train indices, validation indices), both ascending.

    Raises:
        InvalidValueException: ``fraction`` outside (0, 1).
        FoldConstructionException: A class has fewer than 2 members.

    """
    if not 0.0 < fraction < 1.0:
        raise InvalidValueException(f"Validation fraction must be in (0, 1), got {fraction}")
    y = np.asarray(y).astype(np.int64)
    perm = make_rng(seed, "holdout").permutation(y.shape[0])
    val = []
    for label in _class_order(y, perm):
        members = perm[y[perm] == label]
        if members.shape[0] < 2:
            raise FoldConstructionException(
                f"Cannot hold out part of class {label}: it has {members.shape[0]} member(s)")
        n_val = int(np.clip(np.floor(fraction * members.shape[0] + 0.5), 1, members.shape[0] - 1))
        val.append(members[:n_val])
    val_idx = np.sort(np.concatenate(val))
    train_idx = np.setdiff1d(np.arange(y.shape[0]), val_idx)
    return train_idx, val_idx
