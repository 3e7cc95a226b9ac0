"""Brute-force reference implementations and the identity self-check suites.

Nothing here is shared with the fast paths: the expectation oracle builds
full 2**n x 2**n matrices with Kronecker products and multiplies them out,
and gradients come from central finite differences. These exist so that the
production shortcuts (tensor-slot gate application, closed-form cosine,
parameter-shift) always have an independent path to disagree with.

Gate sequences are plain tuples: ``("gate", matrix, target)`` or
``("cnot", control, target)``.

Tolerances: 1e-12 for algebraic gate identities, 1e-10 for closed-form vs
simulation, relative 1e-4 for gradient checks where finite-difference
truncation dominates the budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from . import pipeline, qrnn, qubit

GRAD_REL_FLOOR = 1e-6  # denominators below this are noise, not signal


@dataclass
class OracleReport:
    name: str
    max_deviation: float
    samples: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: max deviation {self.max_deviation:.3e} "
                f"over {self.samples} samples (tol {self.tolerance:.0e})")


# ---------------------------------------------------------------------------
# Reference implementations
# ---------------------------------------------------------------------------


def _full_1q_matrix(gate: np.ndarray, target: int, num_qubits: int) -> np.ndarray:
    # Qubit 0 is the least-significant bit, so it sits rightmost in the kron.
    full = np.eye(1 << target, dtype=complex)
    full = np.kron(np.asarray(gate, dtype=complex), full)
    return np.kron(np.eye(1 << (num_qubits - target - 1), dtype=complex), full)


def _full_cnot_matrix(control: int, target: int, num_qubits: int) -> np.ndarray:
    dim = 1 << num_qubits
    full = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        j = i ^ (1 << target) if (i >> control) & 1 else i
        full[j, i] = 1.0
    return full


def naive_expectation(ops, num_qubits: int, measured_qubit: int) -> float:
    """<Z> on ``measured_qubit`` after ``ops``, by explicit matrix products."""
    if num_qubits > 10:
        raise InvalidParameterError("the matrix oracle is capped at 10 qubits")
    dim = 1 << num_qubits
    unitary = np.eye(dim, dtype=complex)
    for op in ops:
        if op[0] == "gate":
            _, gate, target = op
            unitary = _full_1q_matrix(gate, target, num_qubits) @ unitary
        elif op[0] == "cnot":
            _, control, target = op
            unitary = _full_cnot_matrix(control, target, num_qubits) @ unitary
        else:
            raise InvalidParameterError(f"unknown op kind {op[0]!r}")
    psi = unitary[:, 0]  # acting on |0...0>
    z_full = _full_1q_matrix(np.diag([1.0, -1.0]), measured_qubit, num_qubits)
    return float(np.real(np.conj(psi) @ (z_full @ psi)))


def finite_diff(fn, params, step: float = 1e-5):
    """Central-difference gradient of a scalar function.

    ``params`` may be a flat ndarray or a dict of ndarrays; the result has
    the same structure.
    """
    if step <= 0:
        raise InvalidParameterError("finite-difference step must be positive")
    if isinstance(params, dict):
        return {key: _finite_diff_array(lambda a, k=key: fn({**params, k: a}), value, step)
                for key, value in params.items()}
    return _finite_diff_array(fn, params, step)


def _finite_diff_array(fn, array, step: float) -> np.ndarray:
    array = np.asarray(array, dtype=float)
    grad = np.zeros_like(array)
    flat, gflat = array.ravel(), grad.ravel()
    for i in range(flat.size):
        bumped = flat.copy()
        bumped[i] = flat[i] + step
        f_plus = fn(bumped.reshape(array.shape))
        bumped[i] = flat[i] - step
        f_minus = fn(bumped.reshape(array.shape))
        gflat[i] = (f_plus - f_minus) / (2.0 * step)
    return grad


def relative_gradient_error(estimate, reference) -> float:
    """max over coordinates of |a - b| / max(|a|, |b|, floor)."""
    if isinstance(estimate, dict):
        return max(relative_gradient_error(estimate[k], reference[k]) for k in estimate)
    a = np.asarray(estimate, dtype=float).ravel()
    b = np.asarray(reference, dtype=float).ravel()
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), GRAD_REL_FLOOR)
    return float(np.max(np.abs(a - b) / denom))


# ---------------------------------------------------------------------------
# Identity check suites (used by the tests and the `check` subcommand)
# ---------------------------------------------------------------------------


def _simulate_unit_product(model: qrnn.QrnnSingleQubit, x: np.ndarray) -> float:
    state = qubit.zero_state(1)
    for unit in model.units():
        state = qubit.apply_gate(state, qrnn.unit_unitary(unit, x), 0)
    return qubit.expectation_z(state, 0)


def check_rotation_additivity(num_pairs: int = 1000, seed: int = 42,
                              tolerance: float = 1e-12, ry_fn=None) -> OracleReport:
    """R_y(a) R_y(b) must equal R_y(a + b) entrywise."""
    ry_fn = ry_fn if ry_fn is not None else qubit.ry
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_pairs):
        a, b = rng.uniform(-2.0 * np.pi, 2.0 * np.pi, size=2)
        dev = float(np.max(np.abs(ry_fn(a) @ ry_fn(b) - ry_fn(a + b))))
        worst = max(worst, dev)
    return OracleReport("rotation additivity", worst, num_pairs, tolerance)


def check_closed_form_vs_simulator(num_models: int = 200, seed: int = 42,
                                   tolerance: float = 1e-10) -> OracleReport:
    """cos(2 g_J(x)) against the J-gate statevector simulation."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_models):
        J = int(rng.integers(1, 17))
        model = qrnn.QrnnSingleQubit.random(J, 8, rng)
        x = rng.normal(size=8)
        dev = abs(qrnn.forward(model, x) - _simulate_unit_product(model, x))
        worst = max(worst, dev)
    return OracleReport("closed form vs simulator", worst, num_models, tolerance)


def check_probability_identity(num_units: int = 100, seed: int = 42,
                               tolerance: float = 1e-10) -> OracleReport:
    """sin(c a**-0.5 eta)**2 against the simulated |1> probability."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_units):
        model = qrnn.QrnnSingleQubit.random(1, 4, rng)
        unit = model.units()[0]
        unit.weight = float(rng.uniform(-2.0, 2.0))
        x = rng.normal(size=4)
        state = qubit.apply_gate(qubit.zero_state(1), qrnn.unit_unitary(unit, x), 0)
        dev = abs(qrnn.prob_one_closed(unit, x) - qubit.prob_one(state, 0))
        worst = max(worst, dev)
    return OracleReport("probability identity", worst, num_units, tolerance)


def check_matrix_oracle(num_sequences: int = 100, seed: int = 42,
                        tolerance: float = 1e-12) -> OracleReport:
    """Fast tensor-slot gate application against the full-matrix oracle."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_sequences):
        n = int(rng.integers(1, 4))
        ops = []
        for _ in range(int(rng.integers(1, 9))):
            roll = rng.random()
            if n >= 2 and roll < 0.25:
                control, target = rng.choice(n, size=2, replace=False)
                ops.append(("cnot", int(control), int(target)))
            else:
                theta = float(rng.uniform(-np.pi, np.pi))
                gate = [qubit.rx, qubit.ry, qubit.rz][int(rng.integers(3))](theta)
                ops.append(("gate", gate, int(rng.integers(n))))
        measured = int(rng.integers(n))
        state = qubit.zero_state(n)
        for op in ops:
            if op[0] == "gate":
                state = qubit.apply_gate(state, op[1], op[2])
            else:
                state = qubit.apply_cnot(state, op[1], op[2])
        fast = qubit.expectation_z(state, measured)
        dev = abs(fast - naive_expectation(ops, n, measured))
        worst = max(worst, dev)
    return OracleReport("matrix oracle agreement", worst, num_sequences, tolerance)


def check_parameter_shift_vs_finite_diff(num_models: int = 6, seed: int = 42,
                                         tolerance: float = 1e-4) -> OracleReport:
    """Full pipeline gradients against central finite differences."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(num_models):
        config = pipeline.ModelConfig(
            num_features=4,
            num_qubits=1 + i % 2,
            vqc_layers=1 if i % 4 < 2 else 6,
            head_hidden=4,
        )
        model = pipeline.QrnnModel.random(3, config, rng)
        X = rng.normal(size=(4, 3))
        y = rng.normal(size=4)
        grads = pipeline.model_grad(model, X, y)

        def loss(params):
            probe = model.clone()
            probe.load_params(params)
            return float(np.mean((probe.forward_batch(X) - y) ** 2))

        reference = finite_diff(loss, model.params())
        worst = max(worst, relative_gradient_error(grads, reference))
    return OracleReport("parameter shift vs finite differences", worst, num_models, tolerance)


def run_all_checks(seed: int = 42) -> list[OracleReport]:
    return [
        check_rotation_additivity(seed=seed),
        check_closed_form_vs_simulator(seed=seed),
        check_probability_identity(seed=seed),
        check_matrix_oracle(seed=seed),
        check_parameter_shift_vs_finite_diff(seed=seed),
    ]
