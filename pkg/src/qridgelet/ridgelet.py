"""Classical ridgelet units and the finite ridgelet expansion.

A unit with direction ``u``, scale ``a`` and shift ``b`` evaluates to
``a**-0.5 * eta((x . u_hat - b) / a)`` where ``u_hat`` is ``u`` renormalized
to unit length at evaluation time and ``eta`` is the shared mother profile.
The expansion over J units, weighted by an output vector ``c``, doubles as
the rotation-angle generator of the quantum model and as the feature layer
of the classical baseline.

Scales are stored as ``log_scale`` so that unconstrained gradient updates
keep ``a = exp(log_scale)`` strictly positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateDirectionError, ShapeError

MIN_DIRECTION_NORM = 1e-12


class MotherRidgelet(Enum):
    """One-dimensional profile shared by every unit of a layer."""

    GAUSSIAN_DERIVATIVE = "gaussian_derivative"
    TANH = "tanh"
    SINE = "sine"

    def evaluate(self, t):
        if self is MotherRidgelet.GAUSSIAN_DERIVATIVE:
            return t * np.exp(-0.5 * t * t)
        if self is MotherRidgelet.TANH:
            return np.tanh(t)
        return np.sin(t)

    def derivative(self, t):
        if self is MotherRidgelet.GAUSSIAN_DERIVATIVE:
            return (1.0 - t * t) * np.exp(-0.5 * t * t)
        if self is MotherRidgelet.TANH:
            th = np.tanh(t)
            return 1.0 - th * th
        return np.cos(t)


def mother_eval(mother: MotherRidgelet, t: float) -> float:
    return float(mother.evaluate(float(t)))


@dataclass
class RidgeletUnit:
    """One neuron: direction, log-scale, shift, output weight."""

    direction: np.ndarray
    log_scale: float = 0.0
    shift: float = 0.0
    weight: float = 0.0
    mother: MotherRidgelet = MotherRidgelet.GAUSSIAN_DERIVATIVE

    def __post_init__(self):
        self.direction = np.asarray(self.direction, dtype=float)
        if self.direction.ndim != 1:
            raise ShapeError("direction must be a 1-d vector")

    @property
    def scale(self) -> float:
        return math.exp(self.log_scale)

    @classmethod
    def from_scale(cls, direction, scale: float, shift: float, weight: float = 0.0,
                   mother: MotherRidgelet = MotherRidgelet.GAUSSIAN_DERIVATIVE):
        return cls(direction, math.log(scale), shift, weight, mother)


def _normalized(direction: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(direction))
    if norm < MIN_DIRECTION_NORM:
        raise DegenerateDirectionError(f"direction norm {norm!r} below {MIN_DIRECTION_NORM}")
    return direction / norm


def unit_eval(unit: RidgeletUnit, x: np.ndarray) -> float:
    """a**-0.5 * eta((x . u_hat - b) / a) for a single unit."""
    x = np.asarray(x, dtype=float)
    if x.shape != unit.direction.shape:
        raise ShapeError(f"input shape {x.shape} != direction shape {unit.direction.shape}")
    a = unit.scale
    t = (float(np.dot(x, _normalized(unit.direction))) - unit.shift) / a
    return a ** -0.5 * mother_eval(unit.mother, t)


@dataclass
class RidgeletLayer:
    """J units sharing one mother profile, stored in array form."""

    directions: np.ndarray  # (J, e)
    log_scales: np.ndarray  # (J,)
    shifts: np.ndarray  # (J,)
    mother: MotherRidgelet = MotherRidgelet.GAUSSIAN_DERIVATIVE

    def __post_init__(self):
        self.directions = np.asarray(self.directions, dtype=float)
        self.log_scales = np.asarray(self.log_scales, dtype=float)
        self.shifts = np.asarray(self.shifts, dtype=float)
        if self.directions.ndim != 2:
            raise ShapeError("directions must be (num_units, input_dim)")
        J = self.directions.shape[0]
        if J < 1:
            raise ShapeError("a layer needs at least one unit")
        if self.log_scales.shape != (J,) or self.shifts.shape != (J,):
            raise ShapeError("log_scales and shifts must have one entry per unit")

    @property
    def num_units(self) -> int:
        return self.directions.shape[0]

    @property
    def input_dim(self) -> int:
        return self.directions.shape[1]

    def units(self, weights=None) -> list[RidgeletUnit]:
        """Materialize per-unit views, optionally attaching output weights."""
        w = np.zeros(self.num_units) if weights is None else np.asarray(weights, dtype=float)
        return [
            RidgeletUnit(self.directions[i].copy(), float(self.log_scales[i]),
                         float(self.shifts[i]), float(w[i]), self.mother)
            for i in range(self.num_units)
        ]

    @classmethod
    def from_units(cls, units, mother: MotherRidgelet = MotherRidgelet.GAUSSIAN_DERIVATIVE):
        return cls(
            np.stack([u.direction for u in units]),
            np.array([u.log_scale for u in units]),
            np.array([u.shift for u in units]),
            mother,
        )

    @classmethod
    def random(cls, num_units: int, input_dim: int, rng: np.random.Generator,
               mother: MotherRidgelet = MotherRidgelet.GAUSSIAN_DERIVATIVE):
        """Directions uniform on the unit sphere, scales 1, shifts uniform in [-1, 1]."""
        directions = rng.normal(size=(num_units, input_dim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        shifts = rng.uniform(-1.0, 1.0, size=num_units)
        return cls(directions, np.zeros(num_units), shifts, mother)


def init_output_weights(num_units: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform in [-1/sqrt(J), 1/sqrt(J)]: keeps the initial expansion small."""
    bound = 1.0 / math.sqrt(num_units)
    return rng.uniform(-bound, bound, size=num_units)


@dataclass
class FeatureCache:
    """Intermediates of a batched feature pass, reused by the backward pass."""

    unit_dirs: np.ndarray  # (J, e) normalized rows
    norms: np.ndarray  # (J,) original row norms
    scales: np.ndarray  # (J,)
    inv_sqrt_scales: np.ndarray  # (J,)
    projections: np.ndarray  # (B, J) x . u_hat
    args: np.ndarray  # (B, J) mother argument
    eta: np.ndarray  # (B, J)
    eta_prime: np.ndarray = field(default=None)


def features_with_cache(layer: RidgeletLayer, X: np.ndarray) -> tuple[np.ndarray, FeatureCache]:
    """Feature matrix (B, J) for a batch of inputs, plus backward intermediates."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != layer.input_dim:
        raise ShapeError(f"inputs must be (batch, {layer.input_dim}), got {X.shape}")
    norms = np.linalg.norm(layer.directions, axis=1)
    if np.any(norms < MIN_DIRECTION_NORM):
        raise DegenerateDirectionError("a unit direction has collapsed to zero norm")
    unit_dirs = layer.directions / norms[:, None]
    scales = np.exp(layer.log_scales)
    inv_sqrt = np.exp(-0.5 * layer.log_scales)
    projections = X @ unit_dirs.T
    args = (projections - layer.shifts) / scales
    eta = layer.mother.evaluate(args)
    cache = FeatureCache(unit_dirs, norms, scales, inv_sqrt, projections, args, eta)
    return inv_sqrt * eta, cache


def features_vjp(layer: RidgeletLayer, X: np.ndarray, grad_features: np.ndarray,
                 cache: FeatureCache) -> dict[str, np.ndarray]:
    """Accumulate d(sum of grad_features * features)/d(layer params).

    Returns gradients keyed ``directions`` (J, e), ``log_scales`` (J,),
    ``shifts`` (J,).
    """
    X = np.asarray(X, dtype=float)
    g = np.asarray(grad_features, dtype=float)
    if cache.eta_prime is None:
        cache.eta_prime = layer.mother.derivative(cache.args)
    inv_sqrt, scales = cache.inv_sqrt_scales, cache.scales
    # d feature / d shift = -a**-1.5 * eta'(t)
    d_shift = -(inv_sqrt / scales) * cache.eta_prime
    # d feature / d log_scale = -a**-0.5 * (eta(t)/2 + t*eta'(t))
    d_rho = -inv_sqrt * (0.5 * cache.eta + cache.args * cache.eta_prime)
    # d feature / d u_k = a**-1.5 * eta'(t) * (x_k - proj * u_hat_k) / |u|
    G = g * (inv_sqrt / scales) * cache.eta_prime  # (B, J)
    grad_dirs = (G.T @ X - np.sum(G * cache.projections, axis=0)[:, None] * cache.unit_dirs)
    grad_dirs /= cache.norms[:, None]
    return {
        "directions": grad_dirs,
        "log_scales": np.sum(g * d_rho, axis=0),
        "shifts": np.sum(g * d_shift, axis=0),
    }


def features(layer: RidgeletLayer, x: np.ndarray) -> np.ndarray:
    """Per-unit evaluations for one input; output weights are not applied."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != layer.input_dim:
        raise ShapeError(f"input must be a vector of length {layer.input_dim}, got {x.shape}")
    feats, _ = features_with_cache(layer, x[None, :])
    return feats[0]


def expansion_eval(layer: RidgeletLayer, weights: np.ndarray, x: np.ndarray) -> float:
    """g_J(x): the weighted sum of unit evaluations."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (layer.num_units,):
        raise ShapeError(f"expected {layer.num_units} weights, got shape {weights.shape}")
    return float(np.dot(features(layer, x), weights))
