"""Exact statevector simulation of small qubit registers.

Conventions, fixed once for the whole package:

- A register of ``n`` qubits is a dense complex vector of length ``2**n``.
- Qubit 0 occupies the least-significant bit of the basis-state index, so on
  two qubits the basis order is ``|00>, |01>, |10>, |11>`` with the right bit
  belonging to qubit 0.
- All operations are pure: gates return new ``StateVector`` values and never
  mutate their inputs, which makes states safe to share across threads.

Registers are deliberately tiny (default 1 qubit, hard cap ``MAX_QUBITS``);
there is no sparse path and no noise model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidParameterError, ShapeError

MAX_QUBITS = 10
NORM_TOL = 1e-10

# A gate is a plain (2, 2) complex ndarray; unitarity is checked on use.
Gate2x2 = np.ndarray


class PauliKind(Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"


_PAULI_MATRICES = {
    PauliKind.I: np.array([[1, 0], [0, 1]], dtype=complex),
    PauliKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state over ``num_qubits`` qubits."""

    amps: np.ndarray
    num_qubits: int

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", amps)
        if self.num_qubits < 1 or self.num_qubits > MAX_QUBITS:
            raise InvalidParameterError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        if amps.shape != (1 << self.num_qubits,):
            raise ShapeError(
                f"expected {1 << self.num_qubits} amplitudes for "
                f"{self.num_qubits} qubit(s), got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps.real)) or not np.all(np.isfinite(amps.imag)):
            raise InvalidParameterError("state amplitudes must be finite")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InvalidParameterError(f"state norm**2 = {norm_sq!r}, expected 1")


def zero_state(num_qubits: int = 1) -> StateVector:
    """The computational basis state |0...0>."""
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(amps, num_qubits)


def _require_finite(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise InvalidParameterError(f"rotation angle must be finite, got {theta!r}")
    return theta


def ry(theta: float) -> Gate2x2:
    """Bloch-sphere rotation about the y-axis: [[cos t/2, -sin t/2], [sin t/2, cos t/2]]."""
    half = 0.5 * _require_finite(theta)
    c, s = math.cos(half), math.sin(half)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rx(theta: float) -> Gate2x2:
    """Rotation about the x-axis: [[cos t/2, -i sin t/2], [-i sin t/2, cos t/2]]."""
    half = 0.5 * _require_finite(theta)
    c, s = math.cos(half), math.sin(half)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def rz(theta: float) -> Gate2x2:
    """Rotation about the z-axis: diag(exp(-i t/2), exp(+i t/2))."""
    half = 0.5 * _require_finite(theta)
    return np.array([[np.exp(-1j * half), 0.0], [0.0, np.exp(1j * half)]], dtype=complex)


def pauli(kind: PauliKind) -> Gate2x2:
    return _PAULI_MATRICES[kind].copy()


def is_unitary(gate: np.ndarray, tol: float = 1e-12) -> bool:
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        return False
    return bool(np.max(np.abs(gate.conj().T @ gate - np.eye(2))) <= tol)


def _check_qubit(num_qubits: int, qubit: int, name: str = "qubit") -> None:
    if not 0 <= qubit < num_qubits:
        raise IndexError(f"{name} index {qubit} out of range for {num_qubits} qubit(s)")


def apply_gate(state: StateVector, gate: Gate2x2, target: int) -> StateVector:
    """Apply a single-qubit gate to ``target``, returning a new state."""
    _check_qubit(state.num_qubits, target, "target")
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise ShapeError(f"gate must be 2x2, got shape {gate.shape}")
    if not is_unitary(gate, tol=1e-10):
        raise InvalidParameterError("gate is not unitary")
    low = 1 << target
    high = 1 << (state.num_qubits - target - 1)
    view = state.amps.reshape(high, 2, low)
    new = np.einsum("ab,hbl->hal", gate, view).reshape(-1)
    return StateVector(new, state.num_qubits)


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    """Flip ``target`` on the basis states whose ``control`` bit is 1."""
    _check_qubit(state.num_qubits, control, "control")
    _check_qubit(state.num_qubits, target, "target")
    if control == target:
        raise InvalidParameterError("control and target must differ")
    idx = np.arange(1 << state.num_qubits)
    src = np.where((idx >> control) & 1 == 1, idx ^ (1 << target), idx)
    return StateVector(state.amps[src], state.num_qubits)


def _one_mask(num_qubits: int, qubit: int) -> np.ndarray:
    idx = np.arange(1 << num_qubits)
    return (idx >> qubit) & 1 == 1


def prob_one(state: StateVector, qubit: int) -> float:
    """Probability of measuring |1> on ``qubit`` in the computational basis."""
    _check_qubit(state.num_qubits, qubit)
    p = float(np.sum(np.abs(state.amps[_one_mask(state.num_qubits, qubit)]) ** 2))
    return min(max(p, 0.0), 1.0)


def expectation_z(state: StateVector, qubit: int) -> float:
    """Pauli-Z expectation on ``qubit``; by definition 1 - 2*prob_one."""
    return 1.0 - 2.0 * prob_one(state, qubit)


def sample_shots(state: StateVector, qubit: int, shots: int, seed: int) -> float:
    """Empirical <Z> estimate from ``shots`` seeded Bernoulli measurements.

    Identical (state, qubit, shots, seed) always yields the identical estimate.
    """
    if shots < 1:
        raise InvalidParameterError(f"shots must be >= 1, got {shots}")
    p1 = prob_one(state, qubit)
    rng = np.random.default_rng(seed)
    ones = int(rng.binomial(shots, p1))
    return 1.0 - 2.0 * ones / shots


# ---------------------------------------------------------------------------
# Batched primitives over raw (batch, 2**n) amplitude arrays.
#
# Training evaluates the same circuit at many inputs; these helpers keep that
# inner loop vectorized while using bitwise-identical arithmetic to the
# single-state gates above. They are internal plumbing, not part of the
# public gate API.
# ---------------------------------------------------------------------------


def batch_zero_states(batch: int, num_qubits: int) -> np.ndarray:
    states = np.zeros((batch, 1 << num_qubits), dtype=complex)
    states[:, 0] = 1.0
    return states


def _batch_views(states: np.ndarray, qubit: int, num_qubits: int):
    low = 1 << qubit
    high = 1 << (num_qubits - qubit - 1)
    v = states.reshape(states.shape[0], high, 2, low)
    return v[:, :, 0, :], v[:, :, 1, :]


def apply_ry_batch(states: np.ndarray, thetas, qubit: int, num_qubits: int) -> np.ndarray:
    """R_y on one qubit of every state; ``thetas`` is a scalar or per-state (B,)."""
    half = 0.5 * np.asarray(thetas, dtype=float)
    c, s = np.cos(half), np.sin(half)
    if c.ndim == 1:
        c, s = c[:, None, None], s[:, None, None]
    a0, a1 = _batch_views(states, qubit, num_qubits)
    out = np.empty_like(states).reshape(states.shape[0], -1, 2, a0.shape[-1])
    out[:, :, 0, :] = c * a0 - s * a1
    out[:, :, 1, :] = s * a0 + c * a1
    return out.reshape(states.shape)


def apply_rz_batch(states: np.ndarray, thetas, qubit: int, num_qubits: int) -> np.ndarray:
    half = 0.5 * np.asarray(thetas, dtype=float)
    lo, hi = np.exp(-1j * half), np.exp(1j * half)
    if lo.ndim == 1:
        lo, hi = lo[:, None, None], hi[:, None, None]
    a0, a1 = _batch_views(states, qubit, num_qubits)
    out = np.empty_like(states).reshape(states.shape[0], -1, 2, a0.shape[-1])
    out[:, :, 0, :] = lo * a0
    out[:, :, 1, :] = hi * a1
    return out.reshape(states.shape)


def apply_cnot_batch(states: np.ndarray, control: int, target: int, num_qubits: int) -> np.ndarray:
    idx = np.arange(1 << num_qubits)
    src = np.where((idx >> control) & 1 == 1, idx ^ (1 << target), idx)
    return states[:, src]


def prob_one_batch(states: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    p = np.sum(np.abs(states[:, _one_mask(num_qubits, qubit)]) ** 2, axis=1)
    return np.clip(p, 0.0, 1.0)
