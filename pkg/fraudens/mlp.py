# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# mlp - Implements the multilayer perceptron base learner
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
# 17-Oct-26 Keep the per-epoch loss so callers can check training progress
# -----------------------------------------------------------------------------

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from fraudens.exceptions import (DimensionMismatchException,
                                 DivergenceException, EmptyDatasetException,
                                 InvalidValueException, SingleClassException)
from fraudens.model import ModelKind, TrainedModel, binary_cross_entropy, sigmoid
from fraudens.seeding import make_rng

logger = logging.getLogger(__name__)

Layer = Tuple[np.ndarray, np.ndarray]
"""(weights fan_in x fan_out, bias fan_out)"""

@dataclass(frozen=True)
class MLPParams:
    """Multilayer perceptron hyperparameters.

    Attributes:
        hidden_layers: Width of each hidden ReLU layer.
        learning_rate: SGD step, positive.
        epochs: Passes over the training data, 0 or more.
        batch_size: Samples per SGD step, positive.
        seed: Parent of the initialization and per-epoch shuffle seeds.

    """
    hidden_layers: Tuple[int, ...] = (64,)
    learning_rate: float = 0.01
    epochs: int = 100
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden_layers", tuple(int(h) for h in self.hidden_layers))
        if any(h < 1 for h in self.hidden_layers):
            raise InvalidValueException(f"Hidden layer widths must be positive, got {self.hidden_layers}")
        if not self.learning_rate > 0:
            raise InvalidValueException(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 0:
            raise InvalidValueException(f"epochs must be 0 or more, got {self.epochs}")
        if self.batch_size < 1:
            raise InvalidValueException(f"batch_size must be positive, got {self.batch_size}")

def init_layers(n_inputs: int, hidden_layers: Sequence[int], seed: int) -> List[Layer]:
    """Glorot-uniform weights and zero biases, ending in one output unit.

    Each weight is drawn from ``U(-a, a)`` with ``a = sqrt(6 / (fan_in + fan_out))``.

    """
    rng = make_rng(seed, "init")
    widths = [n_inputs] + list(hidden_layers) + [1]
    layers = []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        layers.append((rng.uniform(-limit, limit, size=(fan_in, fan_out)), np.zeros(fan_out)))
    return layers

def _forward(layers: Sequence[Layer], X: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    activations = [X]
    pre = []
    a = X
    for i, (W, b) in enumerate(layers):
        z = a @ W + b
        pre.append(z)
        a = z if i == len(layers) - 1 else np.maximum(z, 0.0)
        activations.append(a)
    return activations, pre

def _loss(layers: Sequence[Layer], X: np.ndarray, y: np.ndarray) -> float:
    _, pre = _forward(layers, X)
    return binary_cross_entropy(pre[-1][:, 0], y)

def mlp_loss_and_gradients(layers: Sequence[Layer], X: np.ndarray, y: np.ndarray) -> Tuple[float, List[Layer]]:
    """Mean binary cross-entropy of the network and its gradient by backpropagation.

    Returns:
        (loss, gradients), the gradients shaped like ``layers``.

    """
    activations, pre = _forward(layers, X)
    logits = pre[-1][:, 0]
    loss = binary_cross_entropy(logits, y)
    dz = ((sigmoid(logits) - y) / X.shape[0])[:, None]
    grads: List[Layer] = [None] * len(layers)
    for i in range(len(layers) - 1, -1, -1):
        W, _ = layers[i]
        grads[i] = (activations[i].T @ dz, dz.sum(axis=0))
        if i > 0:
            dz = (dz @ W.T) * (pre[i - 1] > 0)
    return loss, grads

class MLPModel(TrainedModel):
    """Fitted feed-forward network, ReLU hidden layers, logistic output.

    Attributes:
        layers: (weights, bias) per layer, input to output.
        loss_history: Training loss before the first epoch and after each one.

    """
    kind = ModelKind.MLP

    def __init__(
        self,
        layers: Sequence[Layer],
        loss_history: Sequence[float] = ()
    ):
        layers = [(np.asarray(W, dtype=np.float64), np.asarray(b, dtype=np.float64)) for W, b in layers]
        super().__init__(layers[0][0].shape[0])
        for (W1, _), (W2, b2) in zip(layers[:-1], layers[1:]):
            if W1.shape[1] != W2.shape[0] or b2.shape != (W2.shape[1],):
                raise DimensionMismatchException("MLP layer shapes do not chain")
        if layers[-1][0].shape[1] != 1:
            raise DimensionMismatchException("MLP must end in a single output unit")
        self.layers = layers
        self.loss_history = [float(v) for v in loss_history]

    @property
    def hidden_layers(self) -> Tuple[int, ...]:
        return tuple(W.shape[1] for W, _ in self.layers[:-1])

    def _predict_proba(self, X: np.ndarray) -> np.ndarray:
        _, pre = _forward(self.layers, X)
        return sigmoid(pre[-1][:, 0])

    def _to_dict(self) -> dict:
        return {"layers": [{"shape": list(W.shape), "weights": W.ravel().tolist(), "bias": b.tolist()}
                           for W, b in self.layers],
                "loss_history": self.loss_history}

    @classmethod
    def _from_dict(cls, d: dict) -> "MLPModel":
        layers = [(np.array(rec["weights"], dtype=np.float64).reshape(rec["shape"]),
                   np.array(rec["bias"], dtype=np.float64)) for rec in d["layers"]]
        return cls(layers, d.get("loss_history", ()))

def train_mlp(X: np.ndarray, y: np.ndarray, params: MLPParams = MLPParams()) -> MLPModel:
    """Train the network by mini-batch SGD on binary cross-entropy.

    Samples are reshuffled each epoch with a generator seeded by
    ``(seed, "epoch", e)``; initial weights come from :func:`init_layers`.

    Raises:
        EmptyDatasetException: ``X`` has no rows or columns.
        SingleClassException: Only one class in ``y``.
        DivergenceException: The loss became non-finite.

    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.float64)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise EmptyDatasetException(f"Cannot train on an empty matrix (shape {X.shape})")
    if y.shape != (X.shape[0],):
        raise DimensionMismatchException(f"X shape {X.shape} does not match y shape {y.shape}")
    if np.unique(y).shape[0] < 2:
        raise SingleClassException("MLP training needs both classes present")
    layers = init_layers(X.shape[1], params.hidden_layers, params.seed)
    history = [_loss(layers, X, y)]
    n = X.shape[0]
    for epoch in range(params.epochs):
        order = make_rng(params.seed, "epoch", epoch).permutation(n)
        for start in range(0, n, params.batch_size):
            batch = order[start:start + params.batch_size]
            loss, grads = mlp_loss_and_gradients(layers, X[batch], y[batch])
            if not np.isfinite(loss):
                raise DivergenceException("mlp", epoch, loss)
            layers = [(W - params.learning_rate * gW, b - params.learning_rate * gb)
                      for (W, b), (gW, gb) in zip(layers, grads)]
        epoch_loss = _loss(layers, X, y)
        if not np.isfinite(epoch_loss):
            raise DivergenceException("mlp", epoch, epoch_loss)
        history.append(epoch_loss)
    logger.debug("model=mlp hidden=%s epochs=%d loss_start=%.6f loss_end=%.6f",
                 list(params.hidden_layers), params.epochs, history[0], history[-1])
    return MLPModel(layers, history)
