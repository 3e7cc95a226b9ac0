"""Single-qubit quantum ridgelet network in closed form.

Each ridgelet unit becomes a y-rotation by twice its weighted output. All
the rotations share one axis, so the J-gate product collapses into a single
effective rotation R_y(2 g_J(x)) and the Pauli-Z expectation of the output
state is exactly ``cos(2 g_J(x))``. The closed form is the production path
(O(J), smooth in every parameter); the gate product exists as its circuit
counterpart and the two are compared to 1e-10 by the test suite.

``encode_input`` realizes the angle-encoding map for a scalar; the closed
form applies the collapsed rotation directly to |0>, so encoding is a
separate entry point used by the full pipeline rather than by ``forward``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidParameterError, ShapeError
from .qubit import Gate2x2, StateVector, ry
from .ridgelet import (
    MotherRidgelet,
    RidgeletLayer,
    RidgeletUnit,
    expansion_eval,
    features_with_cache,
    features_vjp,
    init_output_weights,
    unit_eval,
)


class AngleEncoder(Enum):
    """Scalar-to-angle maps for loading classical values onto a qubit."""

    LINEAR_PI = "linear_pi"  # x normalized to [0, 1] -> pi * x, angles in [0, pi]
    ARCTAN = "arctan"  # any real -> 2 * arctan(x), angles in (-pi, pi)

    def angle(self, x):
        if self is AngleEncoder.LINEAR_PI:
            return np.pi * np.asarray(x, dtype=float)
        return 2.0 * np.arctan(np.asarray(x, dtype=float))

    def angle_derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self is AngleEncoder.LINEAR_PI:
            return np.full_like(x, np.pi)
        return 2.0 / (1.0 + x * x)


def encode_input(encoder: AngleEncoder, x_scalar: float) -> StateVector:
    """R_y(Psi(x))|0> = (cos(Psi/2), sin(Psi/2))."""
    x_scalar = float(x_scalar)
    if not math.isfinite(x_scalar):
        raise InvalidParameterError(f"encoded input must be finite, got {x_scalar!r}")
    psi = float(encoder.angle(x_scalar))
    return StateVector(np.array([math.cos(0.5 * psi), math.sin(0.5 * psi)], dtype=complex), 1)


@dataclass
class QrnnSingleQubit:
    """A ridgelet layer plus output weights, read out through one qubit."""

    layer: RidgeletLayer
    weights: np.ndarray  # (J,)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.layer.num_units,):
            raise ShapeError(
                f"expected {self.layer.num_units} weights, got shape {self.weights.shape}"
            )

    @classmethod
    def random(cls, num_units: int, input_dim: int, rng: np.random.Generator,
               mother: MotherRidgelet = MotherRidgelet.GAUSSIAN_DERIVATIVE):
        layer = RidgeletLayer.random(num_units, input_dim, rng, mother)
        return cls(layer, init_output_weights(num_units, rng))

    def units(self) -> list[RidgeletUnit]:
        return self.layer.units(self.weights)


def unit_unitary(unit: RidgeletUnit, x: np.ndarray) -> Gate2x2:
    """The one-neuron gate R_y(2 c * a**-0.5 * eta((x.u - b)/a))."""
    return ry(2.0 * unit.weight * unit_eval(unit, x))


def qrnn_unitary(model: QrnnSingleQubit, x: np.ndarray) -> Gate2x2:
    """The collapsed J-unit gate R_y(2 g_J(x))."""
    return ry(2.0 * expansion_eval(model.layer, model.weights, x))


def forward(model: QrnnSingleQubit, x: np.ndarray) -> float:
    """<Z> of the output state, in closed form: cos(2 g_J(x))."""
    return math.cos(2.0 * expansion_eval(model.layer, model.weights, x))


def prob_one_closed(unit: RidgeletUnit, x: np.ndarray) -> float:
    """Probability of |1> after one unit's gate: sin(c * a**-0.5 * eta(.))**2."""
    return math.sin(unit.weight * unit_eval(unit, x)) ** 2


def grad_forward(model: QrnnSingleQubit, x: np.ndarray) -> dict[str, np.ndarray]:
    """Exact partials of cos(2 g_J(x)) with respect to every model parameter.

    Keys: ``weights`` (J,), ``directions`` (J, e), ``log_scales`` (J,),
    ``shifts`` (J,).
    """
    x = np.asarray(x, dtype=float)
    X = x[None, :]
    feats, cache = features_with_cache(model.layer, X)
    g = float(feats[0] @ model.weights)
    scale = -2.0 * math.sin(2.0 * g)
    grad_feats = scale * model.weights[None, :]
    grads = features_vjp(model.layer, X, grad_feats, cache)
    grads["weights"] = scale * feats[0]
    return grads
