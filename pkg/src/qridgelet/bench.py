"""Regression metrics, the classical ridgelet baseline, and the comparison harness.

The baseline (CRNN) shares the quantum model's feature layer and prediction
head but reads the scalar expansion ``g_J(x)`` straight into the head, with
no circuit in between. Benchmark cells share the ridgelet initialization
seed and the training configuration so the comparison isolates the quantum
stage. All metrics are computed on the normalized (min-max) scale.
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .data import DataConfig, load_csv, make_windows
from .errors import DataError, InvalidParameterError, ShapeError
from .pipeline import ModelConfig, PredictionHead, QrnnModel, head_forward
from .ridgelet import (
    RidgeletLayer,
    expansion_eval,
    features_with_cache,
    features_vjp,
    init_output_weights,
)
from .training import TrainConfig, mse_loss, train


def rmse(preds: np.ndarray, targets: np.ndarray) -> float:
    return math.sqrt(mse_loss(preds, targets))


def mae(preds: np.ndarray, targets: np.ndarray) -> float:
    preds = np.asarray(preds, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if preds.shape != targets.shape:
        raise InvalidParameterError("predictions and targets must have equal length")
    if preds.size == 0:
        raise InvalidParameterError("MAE of an empty batch is undefined")
    return float(np.mean(np.abs(preds - targets)))


@dataclass
class CrnnModel:
    """Classical ablation: ridgelet expansion feeding the head directly."""

    layer: RidgeletLayer
    weights: np.ndarray  # (m_e,)
    head: PredictionHead  # over the single value g_J(x)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.layer.num_units,):
            raise ShapeError("output weights must have one entry per unit")
        if self.head.input_dim != 1:
            raise ShapeError("the baseline head takes the scalar expansion value")

    @classmethod
    def random(cls, input_dim: int, config: ModelConfig, rng: np.random.Generator):
        layer = RidgeletLayer.random(config.num_features, input_dim, rng, config.mother)
        weights = init_output_weights(config.num_features, rng)
        head = PredictionHead.random(1, config.head_hidden, rng)
        return cls(layer, weights, head)

    def params(self) -> dict[str, np.ndarray]:
        return {
            "ridgelet.directions": self.layer.directions,
            "ridgelet.log_scales": self.layer.log_scales,
            "ridgelet.shifts": self.layer.shifts,
            "crnn.weights": self.weights,
            "head.hidden_weight": self.head.hidden_weight,
            "head.hidden_bias": self.head.hidden_bias,
            "head.out_weight": self.head.out_weight,
            "head.out_bias": np.asarray(self.head.out_bias),
        }

    def load_params(self, params: dict[str, np.ndarray]) -> None:
        self.layer.directions = np.asarray(params["ridgelet.directions"], dtype=float)
        self.layer.log_scales = np.asarray(params["ridgelet.log_scales"], dtype=float)
        self.layer.shifts = np.asarray(params["ridgelet.shifts"], dtype=float)
        self.weights = np.asarray(params["crnn.weights"], dtype=float)
        self.head.hidden_weight = np.asarray(params["head.hidden_weight"], dtype=float)
        self.head.hidden_bias = np.asarray(params["head.hidden_bias"], dtype=float)
        self.head.out_weight = np.asarray(params["head.out_weight"], dtype=float)
        self.head.out_bias = float(params["head.out_bias"])

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        return crnn_forward_batch(self, X)

    def grad_batch(self, X: np.ndarray, y: np.ndarray) -> dict[str, np.ndarray]:
        return crnn_grad(self, X, y)

    def clone(self) -> "CrnnModel":
        return copy.deepcopy(self)


def crnn_forward(model: CrnnModel, x: np.ndarray) -> float:
    """head(g_J(x)) with no cosine transform anywhere."""
    g = expansion_eval(model.layer, model.weights, x)
    return head_forward(model.head, np.array([g]))


def crnn_forward_batch(model: CrnnModel, X: np.ndarray) -> np.ndarray:
    feats, _ = features_with_cache(model.layer, np.asarray(X, dtype=float))
    g = feats @ model.weights
    hidden = np.tanh(np.outer(g, model.head.hidden_weight[:, 0]) + model.head.hidden_bias)
    return hidden @ model.head.out_weight + model.head.out_bias


def crnn_grad(model: CrnnModel, inputs: np.ndarray, targets: np.ndarray) -> dict[str, np.ndarray]:
    """Analytic MSE gradients for the baseline (no circuit, plain chain rule)."""
    X = np.asarray(inputs, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2:
        raise ShapeError("inputs must be a (batch, input_dim) matrix")
    if y.shape != (X.shape[0],):
        raise ShapeError("targets must match the batch size")
    batch = X.shape[0]
    feats, cache = features_with_cache(model.layer, X)
    g = feats @ model.weights  # (B,)
    s1 = np.outer(g, model.head.hidden_weight[:, 0]) + model.head.hidden_bias
    t = np.tanh(s1)
    preds = t @ model.head.out_weight + model.head.out_bias

    r = 2.0 * (preds - y) / batch
    d_t = r[:, None] * model.head.out_weight[None, :]
    d_s1 = d_t * (1.0 - t * t)
    d_g = d_s1 @ model.head.hidden_weight[:, 0]  # (B,)
    d_feats = np.outer(d_g, model.weights)
    ridge = features_vjp(model.layer, X, d_feats, cache)
    return {
        "ridgelet.directions": ridge["directions"],
        "ridgelet.log_scales": ridge["log_scales"],
        "ridgelet.shifts": ridge["shifts"],
        "crnn.weights": d_g @ feats,
        "head.hidden_weight": (d_s1 * g[:, None]).sum(axis=0)[:, None],
        "head.hidden_bias": d_s1.sum(axis=0),
        "head.out_weight": r @ t,
        "head.out_bias": np.asarray(r.sum()),
    }


# ---------------------------------------------------------------------------
# Benchmark harness
# ---------------------------------------------------------------------------


class ModelKind(Enum):
    QRNN = "qrnn"
    CRNN = "crnn"


@dataclass
class BenchRow:
    model: str
    ticker: str
    train_rmse: float
    train_mae: float
    test_rmse: float
    test_mae: float


@dataclass
class BenchTrace:
    model: str
    ticker: str
    actual: np.ndarray
    predicted: np.ndarray


@dataclass
class BenchError:
    ticker: str
    message: str


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    errors: list[BenchError] = field(default_factory=list)
    traces: list[BenchTrace] = field(default_factory=list)
    seed: int = 0
    config: dict = field(default_factory=dict)

    def to_table(self) -> str:
        """Delimited metrics table with one clearly labeled mean row per model."""
        lines = ["model,ticker,train_rmse,train_mae,test_rmse,test_mae"]
        for row in self.rows:
            lines.append(
                f"{row.model},{row.ticker},{row.train_rmse!r},{row.train_mae!r},"
                f"{row.test_rmse!r},{row.test_mae!r}"
            )
        for model in sorted({row.model for row in self.rows}):
            group = [row for row in self.rows if row.model == model]
            means = [float(np.mean([getattr(row, col) for row in group]))
                     for col in ("train_rmse", "train_mae", "test_rmse", "test_mae")]
            lines.append(f"{model},MEAN," + ",".join(repr(v) for v in means))
        return "\n".join(lines) + "\n"

    def write(self, out_dir) -> None:
        """Write the metrics table and one trace file per (model, ticker)."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.csv").write_text(self.to_table())
        traces_dir = out_dir / "traces"
        traces_dir.mkdir(exist_ok=True)
        for trace in self.traces:
            lines = ["index,actual,predicted"]
            for i, (a, p) in enumerate(zip(trace.actual, trace.predicted)):
                lines.append(f"{i},{float(a)!r},{float(p)!r}")
            (traces_dir / f"{trace.model}_{trace.ticker}.csv").write_text("\n".join(lines) + "\n")


def _build_model(kind: ModelKind, input_dim: int, model_config: ModelConfig, seed: int):
    # Fresh generator per cell: both kinds consume the ridgelet draws first,
    # so they start from the identical feature layer.
    rng = np.random.default_rng(seed)
    if kind is ModelKind.QRNN:
        return QrnnModel.random(input_dim, model_config, rng)
    return CrnnModel.random(input_dim, model_config, rng)


def run_benchmark(tickers, kinds, train_config: TrainConfig,
                  data_config: DataConfig,
                  model_config: ModelConfig | None = None) -> BenchReport:
    """Train and score every (ticker, model) cell; missing fixtures become
    error entries and the run continues."""
    model_config = model_config if model_config is not None else ModelConfig()
    kinds = list(kinds)
    report = BenchReport(seed=train_config.seed, config={
        "epochs": train_config.epochs,
        "batch_size": train_config.batch_size,
        "learning_rate": train_config.learning_rate,
        "input_dim": data_config.input_dim,
        "train_ratio": data_config.train_ratio,
        "num_features": model_config.num_features,
        "num_qubits": model_config.num_qubits,
        "vqc_layers": model_config.vqc_layers,
    })
    for ticker in tickers:
        path = Path(data_config.fixture_dir) / f"{ticker}.csv"
        try:
            series, _ = load_csv(path, ticker)
            dataset = make_windows(series, data_config.input_dim, data_config.train_ratio)
        except (FileNotFoundError, DataError, InvalidParameterError) as exc:
            report.errors.append(BenchError(ticker, str(exc)))
            continue
        for kind in kinds:
            model = _build_model(kind, data_config.input_dim, model_config, train_config.seed)
            trained, _ = train(model, dataset, train_config)
            train_preds = trained.forward_batch(dataset.train_inputs)
            test_preds = trained.forward_batch(dataset.test_inputs)
            report.rows.append(BenchRow(
                model=kind.value,
                ticker=ticker,
                train_rmse=rmse(train_preds, dataset.train_targets),
                train_mae=mae(train_preds, dataset.train_targets),
                test_rmse=rmse(test_preds, dataset.test_targets),
                test_mae=mae(test_preds, dataset.test_targets),
            ))
            report.traces.append(BenchTrace(
                model=kind.value,
                ticker=ticker,
                actual=np.asarray(dataset.test_targets, dtype=float).copy(),
                predicted=np.asarray(test_preds, dtype=float),
            ))
    return report
