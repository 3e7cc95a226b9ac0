"""Mini-batch gradient training for the hybrid model and the classical baseline.

The loop is deliberately plain: seeded shuffle of the training windows each
epoch, gradient step per mini-batch (the last partial batch is kept), one
history record per epoch. Everything downstream of the seed is deterministic,
so identical (model init, data, config) reproduces bit-identical parameters.

Any model exposing ``params() / load_params() / forward_batch() / grad_batch()``
over a parameter dictionary can be trained; both the quantum pipeline and the
classical baseline do.
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError

HISTORY_COLUMNS = ("epoch", "train_loss", "train_rmse", "test_rmse")


class Optimizer(Enum):
    ADAM = "adam"
    SGD = "sgd"


@dataclass
class TrainConfig:
    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 1e-3
    seed: int = 42
    optimizer: Optimizer = Optimizer.ADAM
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.epochs < 0:
            raise InvalidParameterError("epochs must be >= 0")
        if self.batch_size < 1:
            raise InvalidParameterError("batch_size must be >= 1")
        if self.learning_rate < 0:
            raise InvalidParameterError("learning_rate must be >= 0")


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    train_rmse: float
    test_rmse: float


@dataclass
class TrainHistory:
    records: list[EpochRecord] = field(default_factory=list)

    def to_table(self) -> str:
        """Comma-delimited text: one header row, full-precision decimal floats."""
        lines = [",".join(HISTORY_COLUMNS)]
        for r in self.records:
            lines.append(f"{r.epoch},{r.train_loss!r},{r.train_rmse!r},{r.test_rmse!r}")
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_table())


def mse_loss(preds: np.ndarray, targets: np.ndarray) -> float:
    preds = np.asarray(preds, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if preds.shape != targets.shape:
        raise InvalidParameterError("predictions and targets must have equal length")
    if preds.size == 0:
        raise InvalidParameterError("loss of an empty batch is undefined")
    diff = preds - targets
    return float(np.mean(diff * diff))


@dataclass
class AdamState:
    step: int
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]


def adam_init(params: dict[str, np.ndarray]) -> AdamState:
    return AdamState(
        step=0,
        m={k: np.zeros_like(np.asarray(v, dtype=float)) for k, v in params.items()},
        v={k: np.zeros_like(np.asarray(v, dtype=float)) for k, v in params.items()},
    )


def adam_step(state: AdamState, params: dict[str, np.ndarray],
              grads: dict[str, np.ndarray], config: TrainConfig):
    """One bias-corrected Adam update; returns (new state, new params)."""
    if set(params) != set(grads):
        raise InvalidParameterError("parameter and gradient keys differ")
    t = state.step + 1
    new_m, new_v, new_params = {}, {}, {}
    for key, p in params.items():
        g = np.asarray(grads[key], dtype=float)
        p = np.asarray(p, dtype=float)
        if g.shape != p.shape:
            raise InvalidParameterError(f"gradient shape mismatch for {key!r}")
        m = config.beta1 * state.m[key] + (1.0 - config.beta1) * g
        v = config.beta2 * state.v[key] + (1.0 - config.beta2) * g * g
        m_hat = m / (1.0 - config.beta1 ** t)
        v_hat = v / (1.0 - config.beta2 ** t)
        new_m[key], new_v[key] = m, v
        new_params[key] = p - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.eps)
    return AdamState(t, new_m, new_v), new_params


def sgd_step(params: dict[str, np.ndarray], grads: dict[str, np.ndarray],
             config: TrainConfig) -> dict[str, np.ndarray]:
    return {k: np.asarray(p, dtype=float) - config.learning_rate * np.asarray(grads[k], dtype=float)
            for k, p in params.items()}


def _rmse(preds: np.ndarray, targets: np.ndarray) -> float:
    return math.sqrt(mse_loss(preds, targets))


def train(model, data, config: TrainConfig):
    """Train a copy of ``model`` on ``data`` and return (trained model, history).

    ``data`` is a WindowedDataset (or anything with ``inputs``, ``targets``
    and ``split_index``). The input model is never mutated.
    """
    X = np.asarray(data.inputs, dtype=float)
    y = np.asarray(data.targets, dtype=float)
    split = int(data.split_index)
    if X.shape[0] == 0:
        raise InvalidParameterError("dataset is empty")
    if split < 1 or split >= X.shape[0]:
        raise InvalidParameterError(
            f"split_index {split} leaves an empty train or test side"
        )
    X_train, y_train = X[:split], y[:split]
    X_test, y_test = X[split:], y[split:]

    model = copy.deepcopy(model)
    params = model.params()
    opt_state = adam_init(params) if config.optimizer is Optimizer.ADAM else None
    rng = np.random.default_rng(config.seed)
    history = TrainHistory()

    for epoch in range(config.epochs):
        order = rng.permutation(split)
        batch_losses = []
        for start in range(0, split, config.batch_size):
            idx = order[start:start + config.batch_size]
            batch_losses.append(mse_loss(model.forward_batch(X_train[idx]), y_train[idx]))
            grads = model.grad_batch(X_train[idx], y_train[idx])
            if config.optimizer is Optimizer.ADAM:
                opt_state, params = adam_step(opt_state, params, grads, config)
            else:
                params = sgd_step(params, grads, config)
            model.load_params(params)
        history.records.append(EpochRecord(
            epoch=epoch,
            train_loss=float(np.mean(batch_losses)),
            train_rmse=_rmse(model.forward_batch(X_train), y_train),
            test_rmse=_rmse(model.forward_batch(X_test), y_test),
        ))
    return model, history
