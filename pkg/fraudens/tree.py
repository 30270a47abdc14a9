# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# tree - Implements the CART decision tree and random forest base learners
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
# 17-Oct-26 Grow trees with an explicit stack; deep trees hit the recursion limit
# 17-Oct-26 Forest trains its trees on a thread pool
# -----------------------------------------------------------------------------

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fraudens.exceptions import (DimensionMismatchException,
                                 EmptyDatasetException, InvalidValueException)
from fraudens.model import ModelKind, TrainedModel
from fraudens.seeding import make_rng

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class DTParams:
    """Decision tree hyperparameters.

    Attributes:
        max_depth: Deepest level grown, ``None`` for unlimited.
        min_samples_split: Nodes smaller than this become leaves, at least 2.
        seed: Recorded for symmetry with the other learners; a single
            tree grown on all features is deterministic.

    """
    max_depth: Optional[int] = None
    min_samples_split: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise InvalidValueException(f"max_depth must be 0 or more, got {self.max_depth}")
        if self.min_samples_split < 2:
            raise InvalidValueException(f"min_samples_split must be at least 2, got {self.min_samples_split}")

@dataclass(frozen=True)
class RFParams:
    """Random forest hyperparameters.

    Attributes:
        n_trees: Number of trees, positive.
        max_features: Features drawn at each split; ``None`` means
            ``floor(sqrt(d))``.
        bootstrap: Grow each tree on a with-replacement resample.
        max_depth: As :class:`DTParams`.
        min_samples_split: As :class:`DTParams`.
        seed: Parent of the per-tree seeds.
        threads: Worker threads for tree growth, ``None`` for the default.

    """
    n_trees: int = 100
    max_features: Optional[int] = None
    bootstrap: bool = True
    max_depth: Optional[int] = None
    min_samples_split: int = 2
    seed: int = 0
    threads: Optional[int] = None

    def __post_init__(self):
        if self.n_trees < 1:
            raise InvalidValueException(f"n_trees must be positive, got {self.n_trees}")
        if self.max_features is not None and self.max_features < 1:
            raise InvalidValueException(f"max_features must be positive, got {self.max_features}")
        DTParams(self.max_depth, self.min_samples_split, self.seed)

def gini(counts: Sequence[float]) -> float:
    """Gini impurity ``1 - sum(p_c^2)`` of a node's class counts.

    Example:
        ``gini([5, 5])`` is 0.5; a pure node is 0.

    """
    c = np.asarray(counts, dtype=np.float64)
    total = c.sum()
    if total <= 0:
        return 0.0
    p = c / total
    return float(1.0 - np.sum(p * p))

def _best_split_on_feature(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Lowest weighted Gini over all midpoints of one feature.

    Returns (impurity, threshold), or (inf, nan) if the feature is constant.

    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ones = np.cumsum(y[order])
    n = xs.shape[0]
    cut = np.flatnonzero(xs[1:] != xs[:-1]) + 1         # left side size at each valid cut
    if cut.shape[0] == 0:
        return math.inf, math.nan
    n_left = cut.astype(np.float64)
    n_right = n - n_left
    left_ones = ones[cut - 1]
    right_ones = ones[-1] - left_ones
    p_left = left_ones / n_left
    p_right = right_ones / n_right
    gini_left = 2.0 * p_left * (1.0 - p_left)
    gini_right = 2.0 * p_right * (1.0 - p_right)
    weighted = (n_left * gini_left + n_right * gini_right) / n
    best = int(np.argmin(weighted))                     # first minimum = lowest threshold
    lo, hi = xs[cut[best] - 1], xs[cut[best]]
    threshold = (lo + hi) / 2.0
    if not lo < threshold < hi:                         # adjacent floats
        threshold = lo
    return float(weighted[best]), float(threshold)

class _TreeBuilder:
    """Grows one CART tree into flat node arrays"""

    def __init__(self, max_depth: Optional[int], min_samples_split: int,
                 max_features: Optional[int], rng: Optional[np.random.Generator]):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.rng = rng
        self.feature: List[int] = []
        self.threshold: List[float] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.counts: List[Tuple[int, int]] = []

    def _new_node(self, y: np.ndarray) -> int:
        n1 = int(y.sum())
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append((y.shape[0] - n1, n1))
        return len(self.feature) - 1

    def _candidates(self, d: int) -> np.ndarray:
        if self.max_features is None or self.max_features >= d:
            return np.arange(d)
        return np.sort(self.rng.choice(d, self.max_features, replace=False))

    def build(self, X: np.ndarray, y: np.ndarray) -> None:
        root = self._new_node(y)
        stack = [(root, np.arange(X.shape[0]), 0)]
        while stack:
            node, idx, depth = stack.pop()
            n0, n1 = self.counts[node]
            if n0 == 0 or n1 == 0:
                continue
            if idx.shape[0] < self.min_samples_split:
                continue
            if self.max_depth is not None and depth >= self.max_depth:
                continue
            best = (math.inf, -1, math.nan)
            for f in self._candidates(X.shape[1]):
                impurity, thr = _best_split_on_feature(X[idx, f], y[idx])
                if impurity < best[0]:
                    best = (impurity, int(f), thr)
            if best[1] < 0:
                continue                                # all candidates constant
            _, f, thr = best
            go_left = X[idx, f] <= thr
            left_idx, right_idx = idx[go_left], idx[~go_left]
            self.feature[node] = f
            self.threshold[node] = thr
            self.left[node] = self._new_node(y[left_idx])
            self.right[node] = self._new_node(y[right_idx])
            stack.append((self.right[node], right_idx, depth + 1))
            stack.append((self.left[node], left_idx, depth + 1))

class DecisionTreeModel(TrainedModel):
    """Fitted CART tree stored as flat node arrays.

    Node 0 is the root. A leaf has ``feature == -1``; every node keeps
    the class counts of the training samples that reached it.

    """
    kind = ModelKind.DT

    def __init__(
        self,
        n_features: int,
        feature: np.ndarray,
        threshold: np.ndarray,
        left: np.ndarray,
        right: np.ndarray,
        counts: np.ndarray
    ):
        super().__init__(n_features)
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.int64).reshape(-1, 2)

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def depth(self) -> int:
        """Edges on the longest root to leaf path"""
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes):                # children always follow parents
            if self.feature[node] >= 0:
                depth[self.left[node]] = depth[self.right[node]] = depth[node] + 1
        return int(depth.max())

    def leaf_index(self, X: np.ndarray) -> np.ndarray:
        """Leaf reached by every row of ``X``"""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] >= 0
        while np.any(active):
            rows = np.flatnonzero(active)
            at = node[rows]
            go_left = X[rows, self.feature[at]] <= self.threshold[at]
            node[rows] = np.where(go_left, self.left[at], self.right[at])
            active = self.feature[node] >= 0
        return node

    def _predict_proba(self, X: np.ndarray) -> np.ndarray:
        c = self.counts[self.leaf_index(X)]
        return c[:, 1] / c.sum(axis=1)

    def _to_dict(self) -> dict:
        def record(node: int) -> dict:
            if self.feature[node] < 0:
                return {"counts": self.counts[node].tolist()}
            return {"feature": int(self.feature[node]),
                    "threshold": float(self.threshold[node]),
                    "counts": self.counts[node].tolist(),
                    "left": record(int(self.left[node])),
                    "right": record(int(self.right[node]))}
        return {"root": record(0)}

    @classmethod
    def _from_dict(cls, d: dict) -> "DecisionTreeModel":
        builder = _TreeBuilder(None, 2, None, None)
        pending = [(d["root"], None, None)]
        while pending:
            rec, parent, side = pending.pop()
            node = len(builder.feature)
            builder.feature.append(int(rec.get("feature", -1)))
            builder.threshold.append(float(rec.get("threshold", 0.0)))
            builder.left.append(-1)
            builder.right.append(-1)
            builder.counts.append(tuple(rec["counts"]))
            if parent is not None:
                getattr(builder, side)[parent] = node
            if "left" in rec:
                pending.append((rec["right"], node, "right"))
                pending.append((rec["left"], node, "left"))
        return cls(int(d["n_features"]), builder.feature, builder.threshold,
                   builder.left, builder.right, builder.counts)

class RandomForestModel(TrainedModel):
    """Fitted random forest: the mean of its trees' probabilities

    Attributes:
        trees: The fitted trees, one per ``n_trees``.
        features_used: Per tree, the sorted features any of its splits test.

    """
    kind = ModelKind.RF

    def __init__(
        self,
        n_features: int,
        trees: Sequence[DecisionTreeModel]
    ):
        super().__init__(n_features)
        self.trees = list(trees)
        self.features_used = [sorted(set(t.feature[t.feature >= 0].tolist())) for t in self.trees]

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def _predict_proba(self, X: np.ndarray) -> np.ndarray:
        total = np.zeros(X.shape[0])
        for tree in self.trees:
            total += tree._predict_proba(X)
        return total / len(self.trees)

    def _to_dict(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def _from_dict(cls, d: dict) -> "RandomForestModel":
        return cls(int(d["n_features"]), [DecisionTreeModel._from_dict(t) for t in d["trees"]])

def _check_training_data(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise EmptyDatasetException(f"Cannot train on an empty matrix (shape {X.shape})")
    if y.shape != (X.shape[0],):
        raise DimensionMismatchException(f"X shape {X.shape} does not match y shape {y.shape}")
    return X, y

def _grow(X: np.ndarray, y: np.ndarray, max_depth: Optional[int], min_samples_split: int,
          max_features: Optional[int], rng: Optional[np.random.Generator]) -> DecisionTreeModel:
    builder = _TreeBuilder(max_depth, min_samples_split, max_features, rng)
    builder.build(X, y)
    return DecisionTreeModel(X.shape[1], builder.feature, builder.threshold,
                             builder.left, builder.right, builder.counts)

def train_decision_tree(X: np.ndarray, y: np.ndarray, params: DTParams = DTParams()) -> DecisionTreeModel:
    """Grow a CART tree by recursive binary splitting on weighted Gini.

    Every feature and every midpoint between consecutive distinct sorted
    values is tried. Growth stops at ``max_depth``, below
    ``min_samples_split`` samples, or at a pure node. Ties go to the lowest
    feature index, then the lowest threshold.

    Raises:
        EmptyDatasetException: ``X`` has no rows or columns.

    Example:
        The four XOR points with ``max_depth >= 2`` are fitted exactly.

    """
    X, y = _check_training_data(X, y)
    tree = _grow(X, y, params.max_depth, params.min_samples_split, None, None)
    logger.debug("model=dt nodes=%d depth=%d", tree.n_nodes, tree.depth)
    return tree

def train_random_forest(X: np.ndarray, y: np.ndarray, params: RFParams = RFParams()) -> RandomForestModel:
    """Grow ``n_trees`` CART trees on bootstrap samples with per-split feature draws.

    Tree ``t`` draws its bootstrap sample and its split features from a
    generator seeded with ``(seed, "tree", t)``, so the forest does not
    depend on how the thread pool schedules the trees.

    Raises:
        EmptyDatasetException: ``X`` has no rows or columns.

    Note:
        * With one tree, no bootstrap and ``max_features`` equal to the
          feature count the forest reproduces :func:`train_decision_tree`.

    """
    X, y = _check_training_data(X, y)
    d = X.shape[1]
    max_features = params.max_features or max(1, int(math.isqrt(d)))

    def grow_one(t: int) -> DecisionTreeModel:
        rng = make_rng(params.seed, "tree", t)
        if params.bootstrap:
            rows = rng.integers(0, X.shape[0], X.shape[0])
            return _grow(X[rows], y[rows], params.max_depth, params.min_samples_split, max_features, rng)
        return _grow(X, y, params.max_depth, params.min_samples_split, max_features, rng)

    with ThreadPoolExecutor(max_workers=params.threads) as pool:
        trees = list(pool.map(grow_one, range(params.n_trees)))
    logger.debug("model=rf trees=%d max_features=%d", len(trees), max_features)
    return RandomForestModel(d, trees)
