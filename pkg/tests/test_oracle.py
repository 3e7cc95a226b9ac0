"""The brute-force references themselves, and the self-check suites."""
import math

import numpy as np
import pytest

from qridgelet.errors import InvalidParameterError
from qridgelet.oracle import (
    check_closed_form_vs_simulator,
    check_matrix_oracle,
    check_parameter_shift_vs_finite_diff,
    check_probability_identity,
    check_rotation_additivity,
    finite_diff,
    naive_expectation,
    run_all_checks,
)
from qridgelet.qubit import ry


class TestNaiveExpectation:
    def test_empty_sequence_gives_one(self):
        assert naive_expectation([], 2, 0) == pytest.approx(1.0)

    def test_single_ry_gives_cosine(self):
        for theta in (0.0, 0.4, 1.9, -2.6):
            value = naive_expectation([("gate", ry(theta), 0)], 1, 0)
            assert value == pytest.approx(math.cos(theta), abs=1e-12)

    def test_too_many_qubits_rejected(self):
        with pytest.raises(InvalidParameterError):
            naive_expectation([], 11, 0)

    def test_agrees_with_fast_path_over_many_sequences(self):
        report = check_matrix_oracle(num_sequences=500, seed=7)
        assert report.passed, report.line()


class TestFiniteDiff:
    def test_constant_function(self):
        grad = finite_diff(lambda p: 1.0, np.array([0.3, -0.2]))
        assert np.allclose(grad, 0.0)

    def test_square_at_three(self):
        grad = finite_diff(lambda p: float(p[0] ** 2), np.array([3.0]))
        assert grad[0] == pytest.approx(6.0, abs=1e-6)

    def test_dict_structure_preserved(self):
        params = {"a": np.array([1.0, 2.0]), "b": np.array([[0.5]])}
        grad = finite_diff(lambda p: float(p["a"].sum() + 3.0 * p["b"].sum()), params)
        assert np.allclose(grad["a"], 1.0, atol=1e-8)
        assert np.allclose(grad["b"], 3.0, atol=1e-8)

    def test_bad_step_rejected(self):
        with pytest.raises(InvalidParameterError):
            finite_diff(lambda p: 0.0, np.zeros(1), step=0.0)


class TestCheckSuites:
    def test_all_identities_pass_on_fresh_build(self):
        for report in run_all_checks(seed=42):
            assert report.passed, report.line()

    def test_corrupted_ry_sign_convention_is_caught(self):
        # A test double with the off-diagonal sign flipped is still a valid
        # matrix but breaks the angle-addition law; the checker must notice.
        def bad_ry(theta):
            half = 0.5 * theta
            c, s = math.cos(half), math.sin(half)
            return np.array([[c, s], [s, c]], dtype=complex)

        report = check_rotation_additivity(num_pairs=50, ry_fn=bad_ry)
        assert not report.passed

    def test_individual_suites(self):
        assert check_closed_form_vs_simulator(num_models=50).passed
        assert check_probability_identity(num_units=50).passed
        assert check_parameter_shift_vs_finite_diff(num_models=2).passed
