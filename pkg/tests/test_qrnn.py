"""Closed-form quantum model against its own circuit simulation."""
import math

import numpy as np
import pytest

from qridgelet.errors import InvalidParameterError
from qridgelet.oracle import finite_diff, relative_gradient_error
from qridgelet.qrnn import (
    AngleEncoder,
    QrnnSingleQubit,
    encode_input,
    forward,
    grad_forward,
    prob_one_closed,
    qrnn_unitary,
    unit_unitary,
)
from qridgelet.qubit import apply_gate, expectation_z, prob_one, zero_state
from qridgelet.ridgelet import RidgeletLayer, RidgeletUnit, expansion_eval

SQRT2_INV = math.sqrt(0.5)


def simulate_gate_product(model, x):
    state = zero_state(1)
    for unit in model.units():
        state = apply_gate(state, unit_unitary(unit, x), 0)
    return state


class TestEncodeInput:
    def test_zero_angle_gives_ground_state(self):
        state = encode_input(AngleEncoder.LINEAR_PI, 0.0)
        assert np.allclose(state.amps, [1.0, 0.0])

    def test_full_angle_gives_excited_state(self):
        state = encode_input(AngleEncoder.LINEAR_PI, 1.0)  # Psi = pi
        assert np.allclose(state.amps, [0.0, 1.0], atol=1e-15)

    def test_half_angle_gives_equal_superposition(self):
        state = encode_input(AngleEncoder.LINEAR_PI, 0.5)
        assert np.allclose(state.amps, [SQRT2_INV, SQRT2_INV])

    def test_arctan_maps_reals_into_range(self):
        for x in (-1e6, -1.0, 0.0, 3.0, 1e9):
            psi = float(AngleEncoder.ARCTAN.angle(x))
            assert -math.pi < psi < math.pi
            encode_input(AngleEncoder.ARCTAN, x)

    def test_non_finite_input_rejected(self):
        with pytest.raises(InvalidParameterError):
            encode_input(AngleEncoder.LINEAR_PI, float("nan"))


class TestUnitUnitary:
    def test_zero_weight_is_identity(self):
        unit = RidgeletUnit(np.array([1.0, 0.0]), weight=0.0)
        assert np.allclose(unit_unitary(unit, np.array([0.5, 0.5])), np.eye(2))

    def test_zero_argument_is_identity(self):
        # x . u_hat == b makes the mother argument zero.
        unit = RidgeletUnit(np.array([1.0, 0.0]), shift=0.7, weight=1.3)
        assert np.allclose(unit_unitary(unit, np.array([0.7, 2.0])), np.eye(2))

    def test_simulated_probability_matches_sine_form(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            unit = RidgeletUnit(rng.normal(size=4), float(rng.uniform(-1, 1)),
                                float(rng.uniform(-1, 1)), float(rng.uniform(-2, 2)))
            x = rng.normal(size=4)
            state = apply_gate(zero_state(1), unit_unitary(unit, x), 0)
            assert prob_one(state, 0) == pytest.approx(prob_one_closed(unit, x), abs=1e-10)


class TestQrnnUnitary:
    def test_single_unit_reduces(self):
        rng = np.random.default_rng(15)
        model = QrnnSingleQubit.random(1, 3, rng)
        x = rng.normal(size=3)
        assert np.allclose(qrnn_unitary(model, x), unit_unitary(model.units()[0], x),
                           atol=1e-12)

    def test_zero_weights_give_identity(self):
        model = QrnnSingleQubit(RidgeletLayer.random(4, 3, np.random.default_rng(0)),
                                np.zeros(4))
        assert np.allclose(qrnn_unitary(model, np.ones(3)), np.eye(2))

    def test_product_path_equals_collapsed_rotation(self):
        rng = np.random.default_rng(16)
        for _ in range(20):
            model = QrnnSingleQubit.random(5, 4, rng)
            x = rng.normal(size=4)
            product = np.eye(2, dtype=complex)
            for unit in model.units():
                product = unit_unitary(unit, x) @ product
            assert np.max(np.abs(product - qrnn_unitary(model, x))) <= 1e-10


class TestForward:
    def test_zero_expansion_gives_one(self):
        model = QrnnSingleQubit(RidgeletLayer.random(3, 2, np.random.default_rng(0)),
                                np.zeros(3))
        assert forward(model, np.ones(2)) == 1.0

    def test_quarter_pi_expansion_gives_zero(self):
        # One unit scaled so that g_J(x) = pi/4 exactly.
        unit_value_target = math.pi / 4
        layer = RidgeletLayer(np.array([[1.0]]), np.array([0.0]), np.array([0.0]))
        x = np.array([1.0])
        base = expansion_eval(layer, np.array([1.0]), x)
        model = QrnnSingleQubit(layer, np.array([unit_value_target / base]))
        assert forward(model, x) == pytest.approx(0.0, abs=1e-15)

    def test_matches_simulator_on_random_models(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            model = QrnnSingleQubit.random(int(rng.integers(1, 9)), 6, rng)
            x = rng.normal(size=6)
            simulated = expectation_z(simulate_gate_product(model, x), 0)
            assert forward(model, x) == pytest.approx(simulated, abs=1e-10)

    def test_bounded(self):
        rng = np.random.default_rng(18)
        for _ in range(50):
            model = QrnnSingleQubit.random(8, 3, rng)
            model.weights = model.weights * 50.0  # big angles still bounded
            assert -1.0 <= forward(model, rng.normal(size=3)) <= 1.0

    def test_unit_order_does_not_matter(self):
        rng = np.random.default_rng(19)
        model = QrnnSingleQubit.random(8, 4, rng)
        x = rng.normal(size=4)
        perm = rng.permutation(8)
        permuted = QrnnSingleQubit(
            RidgeletLayer(model.layer.directions[perm], model.layer.log_scales[perm],
                          model.layer.shifts[perm], model.layer.mother),
            model.weights[perm],
        )
        a = expectation_z(simulate_gate_product(model, x), 0)
        b = expectation_z(simulate_gate_product(permuted, x), 0)
        assert abs(a - b) <= 1e-10


class TestProbOneClosed:
    def test_zero_weight_gives_zero(self):
        unit = RidgeletUnit(np.array([1.0, 0.0]), weight=0.0)
        assert prob_one_closed(unit, np.ones(2)) == 0.0

    def test_half_pi_argument_gives_one(self):
        # Unit built so c * unit_eval == pi/2.
        from qridgelet.ridgelet import unit_eval

        unit = RidgeletUnit(np.array([1.0]), 0.0, 0.0, weight=1.0)
        value = unit_eval(unit, np.array([1.0]))
        unit.weight = (math.pi / 2) / value
        assert prob_one_closed(unit, np.array([1.0])) == pytest.approx(1.0, abs=1e-15)

    def test_hundred_random_configurations(self):
        rng = np.random.default_rng(20)
        for _ in range(100):
            unit = RidgeletUnit(rng.normal(size=3), float(rng.uniform(-1, 1)),
                                float(rng.uniform(-1, 1)), float(rng.uniform(-3, 3)))
            x = rng.normal(size=3)
            state = apply_gate(zero_state(1), unit_unitary(unit, x), 0)
            assert abs(prob_one_closed(unit, x) - prob_one(state, 0)) <= 1e-10


class TestGradForward:
    def test_zero_weights_zero_weight_gradient(self):
        model = QrnnSingleQubit(RidgeletLayer.random(4, 3, np.random.default_rng(1)),
                                np.zeros(4))
        grads = grad_forward(model, np.ones(3))
        assert np.allclose(grads["weights"], 0.0)

    def test_weight_gradient_formula(self):
        rng = np.random.default_rng(22)
        model = QrnnSingleQubit.random(5, 3, rng)
        x = rng.normal(size=3)
        from qridgelet.ridgelet import features

        h = features(model.layer, x)
        g = float(h @ model.weights)
        expected = -2.0 * math.sin(2.0 * g) * h
        assert np.allclose(grad_forward(model, x)["weights"], expected, atol=1e-12)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            model = QrnnSingleQubit.random(4, 3, rng)
            x = rng.normal(size=3)
            grads = grad_forward(model, x)

            params = {
                "directions": model.layer.directions,
                "log_scales": model.layer.log_scales,
                "shifts": model.layer.shifts,
                "weights": model.weights,
            }

            def value(p):
                probe = QrnnSingleQubit(
                    RidgeletLayer(p["directions"], p["log_scales"], p["shifts"],
                                  model.layer.mother),
                    p["weights"],
                )
                return forward(probe, x)

            reference = finite_diff(value, params)
            assert relative_gradient_error(grads, reference) <= 1e-5
