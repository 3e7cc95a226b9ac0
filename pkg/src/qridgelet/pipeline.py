"""The hybrid forecasting pipeline: ridgelet features -> linear map ->
variational quantum circuit -> dense prediction head.

Circuit template: every qubit is loaded once with R_y(angle), then each of
the L layers applies a trainable R_y followed by a trainable R_z per qubit
and, for two or more qubits, a CNOT ring (qubit q controls q+1 mod m_q).
With one qubit the template degenerates to the plain rotation chain of the
closed-form model.

Gradients: the classical stages are differentiated by hand; every circuit
angle (encoding angles included) uses the parameter-shift rule
``d<Z>/dt = (<Z>(t + pi/2) - <Z>(t - pi/2)) / 2``, which is exact for
rotation-generated gates. Shot-sampled evaluation is inference-only, so
gradient requests in shots mode raise ``UnsupportedModeError``.

Checkpoints are JSON: a schema tag, the model dimensions, and one flat
float64 array per parameter. Python's JSON float formatting round-trips
binary64 exactly, so save/load is lossless.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError, ShapeError, UnsupportedModeError
from .qrnn import AngleEncoder
from .qubit import (
    StateVector,
    apply_cnot_batch,
    apply_ry_batch,
    apply_rz_batch,
    batch_zero_states,
    prob_one_batch,
    sample_shots,
)
from .ridgelet import MotherRidgelet, RidgeletLayer, features_with_cache, features_vjp

CHECKPOINT_SCHEMA = "qrnn-checkpoint/1"


@dataclass
class LinearMap:
    """Affine map from ridgelet-feature space to qubit-angle space."""

    weight: np.ndarray  # (m_q, m_e)
    bias: np.ndarray  # (m_q,)

    def __post_init__(self):
        self.weight = np.asarray(self.weight, dtype=float)
        self.bias = np.asarray(self.bias, dtype=float)
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise ShapeError("weight must be (m_q, m_e) with a matching bias")

    @classmethod
    def random(cls, num_features: int, num_qubits: int, rng: np.random.Generator):
        bound = 1.0 / np.sqrt(num_features)
        return cls(rng.uniform(-bound, bound, size=(num_qubits, num_features)),
                   np.zeros(num_qubits))


@dataclass
class VqcParams:
    """Trainable circuit angles, one (R_y, R_z) pair per layer per qubit."""

    theta: np.ndarray  # (layers, m_q, 2)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        if self.theta.ndim != 3 or self.theta.shape[2] != 2:
            raise ShapeError("theta must have shape (layers, num_qubits, 2)")
        if self.theta.shape[0] < 1 or self.theta.shape[1] < 1:
            raise InvalidParameterError("need at least one layer and one qubit")
        if not np.all(np.isfinite(self.theta)):
            raise InvalidParameterError("circuit angles must be finite")

    @property
    def layers(self) -> int:
        return self.theta.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.theta.shape[1]

    @classmethod
    def random(cls, layers: int, num_qubits: int, rng: np.random.Generator,
               scale: float = 0.1):
        return cls(rng.uniform(-scale, scale, size=(layers, num_qubits, 2)))


@dataclass
class PredictionHead:
    """Two dense layers: tanh hidden layer, then a linear scalar readout."""

    hidden_weight: np.ndarray  # (h, in)
    hidden_bias: np.ndarray  # (h,)
    out_weight: np.ndarray  # (h,)
    out_bias: float = 0.0

    def __post_init__(self):
        self.hidden_weight = np.asarray(self.hidden_weight, dtype=float)
        self.hidden_bias = np.asarray(self.hidden_bias, dtype=float)
        self.out_weight = np.asarray(self.out_weight, dtype=float)
        h = self.hidden_weight.shape[0]
        if self.hidden_bias.shape != (h,) or self.out_weight.shape != (h,):
            raise ShapeError("head layer shapes are inconsistent")
        self.out_bias = float(self.out_bias)

    @property
    def input_dim(self) -> int:
        return self.hidden_weight.shape[1]

    @classmethod
    def random(cls, input_dim: int, hidden_dim: int, rng: np.random.Generator):
        b_in = 1.0 / np.sqrt(input_dim)
        b_h = 1.0 / np.sqrt(hidden_dim)
        return cls(rng.uniform(-b_in, b_in, size=(hidden_dim, input_dim)),
                   np.zeros(hidden_dim),
                   rng.uniform(-b_h, b_h, size=hidden_dim),
                   0.0)


@dataclass
class ModelConfig:
    """Pipeline sizes and component choices; defaults match the benchmark setup."""

    num_features: int = 32  # m_e, ridgelet units
    num_qubits: int = 1  # m_q
    vqc_layers: int = 6
    head_hidden: int = 16
    mother: MotherRidgelet = MotherRidgelet.GAUSSIAN_DERIVATIVE
    encoder: AngleEncoder = AngleEncoder.LINEAR_PI
    shots: int | None = None


@dataclass
class QrnnModel:
    """Every trainable stage of the pipeline, plus the encoding choice."""

    layer: RidgeletLayer
    linear: LinearMap
    vqc: VqcParams
    head: PredictionHead
    encoder: AngleEncoder = AngleEncoder.LINEAR_PI
    shots: int | None = None

    def __post_init__(self):
        if self.linear.weight.shape != (self.vqc.num_qubits, self.layer.num_units):
            raise ShapeError("linear map does not bridge feature and qubit spaces")
        if self.head.input_dim != self.vqc.num_qubits:
            raise ShapeError("head input dimension must equal the qubit count")
        if self.shots is not None and self.shots < 1:
            raise InvalidParameterError("shots must be >= 1 when set")

    @classmethod
    def random(cls, input_dim: int, config: ModelConfig, rng: np.random.Generator):
        layer = RidgeletLayer.random(config.num_features, input_dim, rng, config.mother)
        linear = LinearMap.random(config.num_features, config.num_qubits, rng)
        vqc = VqcParams.random(config.vqc_layers, config.num_qubits, rng)
        head = PredictionHead.random(config.num_qubits, config.head_hidden, rng)
        return cls(layer, linear, vqc, head, config.encoder, config.shots)

    # Parameter dictionary protocol shared with the trainer.
    def params(self) -> dict[str, np.ndarray]:
        return {
            "ridgelet.directions": self.layer.directions,
            "ridgelet.log_scales": self.layer.log_scales,
            "ridgelet.shifts": self.layer.shifts,
            "linear.weight": self.linear.weight,
            "linear.bias": self.linear.bias,
            "vqc.theta": self.vqc.theta,
            "head.hidden_weight": self.head.hidden_weight,
            "head.hidden_bias": self.head.hidden_bias,
            "head.out_weight": self.head.out_weight,
            "head.out_bias": np.asarray(self.head.out_bias),
        }

    def load_params(self, params: dict[str, np.ndarray]) -> None:
        self.layer.directions = np.asarray(params["ridgelet.directions"], dtype=float)
        self.layer.log_scales = np.asarray(params["ridgelet.log_scales"], dtype=float)
        self.layer.shifts = np.asarray(params["ridgelet.shifts"], dtype=float)
        self.linear.weight = np.asarray(params["linear.weight"], dtype=float)
        self.linear.bias = np.asarray(params["linear.bias"], dtype=float)
        self.vqc.theta = np.asarray(params["vqc.theta"], dtype=float)
        self.head.hidden_weight = np.asarray(params["head.hidden_weight"], dtype=float)
        self.head.hidden_bias = np.asarray(params["head.hidden_bias"], dtype=float)
        self.head.out_weight = np.asarray(params["head.out_weight"], dtype=float)
        self.head.out_bias = float(params["head.out_bias"])

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        return model_forward_batch(self, X)

    def grad_batch(self, X: np.ndarray, y: np.ndarray) -> dict[str, np.ndarray]:
        return model_grad(self, X, y)

    def clone(self) -> "QrnnModel":
        return copy.deepcopy(self)


# ---------------------------------------------------------------------------
# Circuit evaluation
# ---------------------------------------------------------------------------


def _run_circuit(theta: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """States (B, 2**m_q) after encoding rotations and all VQC layers."""
    batch, m = angles.shape
    layers = theta.shape[0]
    states = batch_zero_states(batch, m)
    for q in range(m):
        states = apply_ry_batch(states, angles[:, q], q, m)
    for layer in range(layers):
        for q in range(m):
            states = apply_ry_batch(states, theta[layer, q, 0], q, m)
            states = apply_rz_batch(states, theta[layer, q, 1], q, m)
        if m >= 2:
            for q in range(m):
                states = apply_cnot_batch(states, q, (q + 1) % m, m)
    return states


def _circuit_expectations(theta: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Per-qubit <Z> for a batch of encoding-angle vectors; shape (B, m_q)."""
    states = _run_circuit(theta, angles)
    m = angles.shape[1]
    out = np.empty_like(angles)
    for q in range(m):
        out[:, q] = 1.0 - 2.0 * prob_one_batch(states, q, m)
    return out


def _circuit_jacobians(theta: np.ndarray, angles: np.ndarray):
    """Exact circuit output and its parameter-shift Jacobians.

    Returns ``z`` (B, m), ``d_angles`` (B, m, m) with ``d z_k / d angle_p``,
    and ``d_theta`` (B, m, layers, m, 2).
    """
    batch, m = angles.shape
    layers = theta.shape[0]
    z = _circuit_expectations(theta, angles)
    d_angles = np.empty((batch, m, m))
    for p in range(m):
        shifted = np.zeros_like(angles)
        shifted[:, p] = 0.5 * np.pi
        plus = _circuit_expectations(theta, angles + shifted)
        minus = _circuit_expectations(theta, angles - shifted)
        d_angles[:, :, p] = 0.5 * (plus - minus)
    d_theta = np.empty((batch, m, layers, m, 2))
    for layer in range(layers):
        for q in range(m):
            for j in range(2):
                t_plus = theta.copy()
                t_plus[layer, q, j] += 0.5 * np.pi
                t_minus = theta.copy()
                t_minus[layer, q, j] -= 0.5 * np.pi
                plus = _circuit_expectations(t_plus, angles)
                minus = _circuit_expectations(t_minus, angles)
                d_theta[:, :, layer, q, j] = 0.5 * (plus - minus)
    return z, d_angles, d_theta


# ---------------------------------------------------------------------------
# Stage ops
# ---------------------------------------------------------------------------


def map_to_qubit_space(linear: LinearMap, feats: np.ndarray) -> np.ndarray:
    """W @ features + bias."""
    feats = np.asarray(feats, dtype=float)
    if feats.shape != (linear.weight.shape[1],):
        raise ShapeError(f"expected {linear.weight.shape[1]} features, got {feats.shape}")
    return linear.weight @ feats + linear.bias


def vqc_forward(params: VqcParams, angles: np.ndarray, shots: int | None = None,
                seed: int = 0) -> np.ndarray:
    """Per-qubit <Z> after the circuit; exact unless ``shots`` is given."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (params.num_qubits,):
        raise ShapeError(f"expected {params.num_qubits} encoding angles, got {angles.shape}")
    if shots is None:
        return _circuit_expectations(params.theta, angles[None, :])[0]
    state = StateVector(_run_circuit(params.theta, angles[None, :])[0], params.num_qubits)
    return np.array([sample_shots(state, q, shots, seed + q)
                     for q in range(params.num_qubits)])


def head_forward(head: PredictionHead, q_out: np.ndarray) -> float:
    """out_w . tanh(W q_out + b1) + b2."""
    q_out = np.asarray(q_out, dtype=float)
    if q_out.shape != (head.input_dim,):
        raise ShapeError(f"expected {head.input_dim} head inputs, got {q_out.shape}")
    hidden = np.tanh(head.hidden_weight @ q_out + head.hidden_bias)
    return float(head.out_weight @ hidden + head.out_bias)


def model_forward(model: QrnnModel, x: np.ndarray, seed: int = 0) -> float:
    """One sample through every stage; chained exactly like the stage ops."""
    feats, _ = features_with_cache(model.layer, np.asarray(x, dtype=float)[None, :])
    w = map_to_qubit_space(model.linear, feats[0])
    angles = model.encoder.angle(w)
    z = vqc_forward(model.vqc, angles, shots=model.shots, seed=seed)
    return head_forward(model.head, z)


def model_forward_batch(model: QrnnModel, X: np.ndarray) -> np.ndarray:
    """Vectorized predictions for a batch of inputs (exact-expectation mode)."""
    X = np.asarray(X, dtype=float)
    if model.shots is not None:
        return np.array([model_forward(model, X[i], seed=i) for i in range(X.shape[0])])
    feats, _ = features_with_cache(model.layer, X)
    w = feats @ model.linear.weight.T + model.linear.bias
    z = _circuit_expectations(model.vqc.theta, model.encoder.angle(w))
    hidden = np.tanh(z @ model.head.hidden_weight.T + model.head.hidden_bias)
    return hidden @ model.head.out_weight + model.head.out_bias


def model_grad(model: QrnnModel, inputs: np.ndarray, targets: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of mean squared error over the batch, for every parameter.

    Classical stages use the analytic chain rule; circuit angles use the
    parameter-shift rule. Requires exact-expectation mode.
    """
    if model.shots is not None:
        raise UnsupportedModeError("gradients are undefined under shot sampling")
    X = np.asarray(inputs, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2:
        raise ShapeError("inputs must be a (batch, input_dim) matrix")
    if y.shape != (X.shape[0],):
        raise ShapeError("targets must match the batch size")
    batch = X.shape[0]

    feats, cache = features_with_cache(model.layer, X)
    w = feats @ model.linear.weight.T + model.linear.bias  # (B, m)
    angles = model.encoder.angle(w)
    z, d_angles, d_theta = _circuit_jacobians(model.vqc.theta, angles)
    s1 = z @ model.head.hidden_weight.T + model.head.hidden_bias  # (B, h)
    t = np.tanh(s1)
    preds = t @ model.head.out_weight + model.head.out_bias

    r = 2.0 * (preds - y) / batch  # d loss / d pred
    d_t = r[:, None] * model.head.out_weight[None, :]
    d_s1 = d_t * (1.0 - t * t)
    d_z = d_s1 @ model.head.hidden_weight  # (B, m)
    d_ang = np.einsum("bk,bkp->bp", d_z, d_angles)
    d_w = d_ang * model.encoder.angle_derivative(w)
    d_feats = d_w @ model.linear.weight  # (B, m_e)
    ridge = features_vjp(model.layer, X, d_feats, cache)

    return {
        "ridgelet.directions": ridge["directions"],
        "ridgelet.log_scales": ridge["log_scales"],
        "ridgelet.shifts": ridge["shifts"],
        "linear.weight": d_w.T @ feats,
        "linear.bias": d_w.sum(axis=0),
        "vqc.theta": np.einsum("bk,bklqj->lqj", d_z, d_theta),
        "head.hidden_weight": d_s1.T @ z,
        "head.hidden_bias": d_s1.sum(axis=0),
        "head.out_weight": r @ t,
        "head.out_bias": np.asarray(r.sum()),
    }


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------


def save_checkpoint(model: QrnnModel, path) -> None:
    """Write a self-describing JSON checkpoint (lossless float64 round trip)."""
    payload = {
        "schema": CHECKPOINT_SCHEMA,
        "input_dim": model.layer.input_dim,
        "num_features": model.layer.num_units,
        "num_qubits": model.vqc.num_qubits,
        "vqc_layers": model.vqc.layers,
        "head_hidden": model.head.hidden_weight.shape[0],
        "mother": model.layer.mother.value,
        "encoder": model.encoder.value,
        "shots": model.shots,
        "params": {
            name: {"shape": list(arr.shape), "data": np.asarray(arr, dtype=float).ravel().tolist()}
            for name, arr in model.params().items()
        },
    }
    Path(path).write_text(json.dumps(payload, indent=1))


def load_checkpoint(path) -> QrnnModel:
    payload = json.loads(Path(path).read_text())
    if payload.get("schema") != CHECKPOINT_SCHEMA:
        raise InvalidParameterError(
            f"unrecognized checkpoint schema {payload.get('schema')!r}"
        )
    params = {
        name: np.array(entry["data"], dtype=float).reshape(entry["shape"])
        for name, entry in payload["params"].items()
    }
    model = QrnnModel(
        layer=RidgeletLayer(
            params["ridgelet.directions"],
            params["ridgelet.log_scales"],
            params["ridgelet.shifts"],
            MotherRidgelet(payload["mother"]),
        ),
        linear=LinearMap(params["linear.weight"], params["linear.bias"]),
        vqc=VqcParams(params["vqc.theta"]),
        head=PredictionHead(
            params["head.hidden_weight"],
            params["head.hidden_bias"],
            params["head.out_weight"],
            float(params["head.out_bias"]),
        ),
        encoder=AngleEncoder(payload["encoder"]),
        shots=payload["shots"],
    )
    return model
