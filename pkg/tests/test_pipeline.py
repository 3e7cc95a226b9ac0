"""Pipeline stages, circuit behavior, gradients, and checkpointing."""
import math

import numpy as np
import pytest

from qridgelet.errors import InvalidParameterError, ShapeError, UnsupportedModeError
from qridgelet.oracle import finite_diff, relative_gradient_error
from qridgelet.pipeline import (
    LinearMap,
    ModelConfig,
    PredictionHead,
    QrnnModel,
    VqcParams,
    head_forward,
    load_checkpoint,
    map_to_qubit_space,
    model_forward,
    model_forward_batch,
    model_grad,
    save_checkpoint,
    vqc_forward,
)
from qridgelet.qrnn import AngleEncoder
from qridgelet.ridgelet import features


def small_model(rng, num_qubits=1, vqc_layers=2, num_features=4, input_dim=3):
    config = ModelConfig(num_features=num_features, num_qubits=num_qubits,
                         vqc_layers=vqc_layers, head_hidden=4)
    return QrnnModel.random(input_dim, config, rng)


class TestLinearMap:
    def test_zero_map_gives_zero(self):
        linear = LinearMap(np.zeros((2, 3)), np.zeros(2))
        assert np.array_equal(map_to_qubit_space(linear, np.ones(3)), np.zeros(2))

    def test_identity_map_passes_features_through(self):
        linear = LinearMap(np.eye(3), np.zeros(3))
        feats = np.array([0.1, -0.5, 2.0])
        assert np.array_equal(map_to_qubit_space(linear, feats), feats)

    def test_matches_double_loop_oracle(self):
        rng = np.random.default_rng(30)
        linear = LinearMap(rng.normal(size=(3, 5)), rng.normal(size=3))
        feats = rng.normal(size=5)
        by_hand = np.array([
            sum(linear.weight[i, j] * feats[j] for j in range(5)) + linear.bias[i]
            for i in range(3)
        ])
        assert np.allclose(map_to_qubit_space(linear, feats), by_hand, atol=1e-12)

    def test_shape_checked(self):
        linear = LinearMap(np.zeros((2, 3)), np.zeros(2))
        with pytest.raises(ShapeError):
            map_to_qubit_space(linear, np.ones(4))


class TestVqcForward:
    def test_identity_circuit_on_ground_state(self):
        params = VqcParams(np.zeros((6, 1, 2)))
        assert np.allclose(vqc_forward(params, np.zeros(1)), [1.0])

    def test_pi_encoding_flips(self):
        params = VqcParams(np.zeros((6, 1, 2)))
        assert np.allclose(vqc_forward(params, np.array([math.pi])), [-1.0], atol=1e-15)

    def test_pure_ry_circuit_adds_angles(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            layers = int(rng.integers(1, 7))
            theta = np.zeros((layers, 1, 2))
            theta[:, 0, 0] = rng.uniform(-2, 2, size=layers)
            angle = float(rng.uniform(-2, 2))
            out = vqc_forward(VqcParams(theta), np.array([angle]))
            assert out[0] == pytest.approx(math.cos(angle + theta[:, 0, 0].sum()), abs=1e-12)

    def test_outputs_bounded(self):
        rng = np.random.default_rng(32)
        for _ in range(20):
            m = int(rng.integers(1, 4))
            params = VqcParams(rng.uniform(-4, 4, size=(3, m, 2)))
            out = vqc_forward(params, rng.uniform(-4, 4, size=m))
            assert np.all(out >= -1.0) and np.all(out <= 1.0)

    def test_shots_mode_is_seeded(self):
        params = VqcParams(np.full((2, 1, 2), 0.3))
        angles = np.array([0.9])
        a = vqc_forward(params, angles, shots=200, seed=5)
        b = vqc_forward(params, angles, shots=200, seed=5)
        assert np.array_equal(a, b)

    def test_shots_zero_rejected(self):
        params = VqcParams(np.zeros((1, 1, 2)))
        with pytest.raises(InvalidParameterError):
            vqc_forward(params, np.zeros(1), shots=0)

    def test_angle_count_checked(self):
        params = VqcParams(np.zeros((1, 2, 2)))
        with pytest.raises(ShapeError):
            vqc_forward(params, np.zeros(3))


class TestHead:
    def test_all_zero_head_gives_zero(self):
        head = PredictionHead(np.zeros((4, 2)), np.zeros(4), np.zeros(4), 0.0)
        assert head_forward(head, np.ones(2)) == 0.0

    def test_zero_hidden_weights_give_bias(self):
        head = PredictionHead(np.zeros((4, 2)), np.zeros(4), np.ones(4), 2.5)
        assert head_forward(head, np.array([3.0, -1.0])) == pytest.approx(2.5)

    def test_matches_independent_evaluation(self):
        rng = np.random.default_rng(33)
        head = PredictionHead.random(3, 5, rng)
        z = rng.normal(size=3)
        by_hand = 0.0
        for k in range(5):
            pre = sum(head.hidden_weight[k, j] * z[j] for j in range(3)) + head.hidden_bias[k]
            by_hand += head.out_weight[k] * math.tanh(pre)
        by_hand += head.out_bias
        assert head_forward(head, z) == pytest.approx(by_hand, abs=1e-12)


class TestModelForward:
    def test_zero_map_and_head_give_zero(self):
        rng = np.random.default_rng(34)
        model = small_model(rng)
        model.linear.weight[:] = 0.0
        model.linear.bias[:] = 0.0
        model.head.hidden_weight[:] = 0.0
        model.head.hidden_bias[:] = 0.0
        model.head.out_weight[:] = 0.0
        model.head.out_bias = 0.0
        for x in rng.normal(size=(5, 3)):
            assert model_forward(model, x) == 0.0

    def test_deterministic(self):
        rng = np.random.default_rng(35)
        model = small_model(rng)
        x = rng.normal(size=3)
        assert model_forward(model, x) == model_forward(model, x)

    def test_equals_manually_chained_stages(self):
        rng = np.random.default_rng(36)
        model = small_model(rng, num_qubits=2)
        x = rng.normal(size=3)
        h = features(model.layer, x)
        w = map_to_qubit_space(model.linear, h)
        z = vqc_forward(model.vqc, model.encoder.angle(w))
        expected = head_forward(model.head, z)
        assert model_forward(model, x) == pytest.approx(expected, abs=1e-12)

    def test_batch_agrees_with_single(self):
        rng = np.random.default_rng(37)
        model = small_model(rng, num_qubits=2, vqc_layers=3)
        X = rng.normal(size=(6, 3))
        batch = model_forward_batch(model, X)
        singles = [model_forward(model, x) for x in X]
        assert np.allclose(batch, singles, atol=1e-12)


class TestModelGrad:
    def test_zero_out_weight_kills_upstream_gradients(self):
        rng = np.random.default_rng(38)
        model = small_model(rng)
        model.head.out_weight[:] = 0.0
        grads = model_grad(model, rng.normal(size=(4, 3)), rng.normal(size=4))
        for key, value in grads.items():
            if key.startswith(("ridgelet.", "linear.", "vqc.")) or key == "head.hidden_weight":
                assert np.allclose(value, 0.0), key

    @pytest.mark.parametrize("num_qubits,vqc_layers", [(1, 1), (1, 6), (2, 1), (2, 6)])
    def test_matches_finite_differences(self, num_qubits, vqc_layers):
        rng = np.random.default_rng(39 + num_qubits + vqc_layers)
        model = small_model(rng, num_qubits=num_qubits, vqc_layers=vqc_layers)
        X = rng.normal(size=(4, 3))
        y = rng.normal(size=4)
        grads = model_grad(model, X, y)

        def loss(params):
            probe = model.clone()
            probe.load_params(params)
            return float(np.mean((probe.forward_batch(X) - y) ** 2))

        reference = finite_diff(loss, model.params())
        assert relative_gradient_error(grads, reference) <= 1e-4

    def test_parameter_shift_equals_analytic_for_pure_ry(self):
        # With all R_z angles zero the single-qubit output is
        # cos(angle + sum of R_y thetas); its derivative is -sin(total).
        rng = np.random.default_rng(40)
        for _ in range(10):
            layers = int(rng.integers(1, 7))
            theta = np.zeros((layers, 1, 2))
            theta[:, 0, 0] = rng.uniform(-2, 2, size=layers)
            angle = float(rng.uniform(-2, 2))
            total = angle + theta[:, 0, 0].sum()
            from qridgelet.pipeline import _circuit_jacobians

            _, d_angles, d_theta = _circuit_jacobians(theta, np.array([[angle]]))
            assert d_angles[0, 0, 0] == pytest.approx(-math.sin(total), abs=1e-10)
            for layer in range(layers):
                assert d_theta[0, 0, layer, 0, 0] == pytest.approx(
                    -math.sin(total), abs=1e-10
                )

    def test_shots_mode_rejected(self):
        rng = np.random.default_rng(41)
        model = small_model(rng)
        model.shots = 128
        with pytest.raises(UnsupportedModeError):
            model_grad(model, rng.normal(size=(3, 3)), rng.normal(size=3))


class TestCheckpoint:
    def test_round_trip_is_lossless(self, tmp_path):
        rng = np.random.default_rng(42)
        model = small_model(rng, num_qubits=2, vqc_layers=3)
        path = tmp_path / "model.json"
        save_checkpoint(model, path)
        loaded = load_checkpoint(path)
        for key, value in model.params().items():
            assert np.array_equal(np.asarray(value), np.asarray(loaded.params()[key])), key
        assert loaded.encoder is model.encoder
        assert loaded.shots == model.shots
        x = rng.normal(size=3)
        assert model_forward(loaded, x) == model_forward(model, x)

    def test_unknown_schema_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"schema": "other/9"}')
        with pytest.raises(InvalidParameterError):
            load_checkpoint(path)


class TestEncoderInPipeline:
    def test_arctan_encoder_changes_predictions(self):
        rng = np.random.default_rng(43)
        model = small_model(rng)
        x = rng.normal(size=3)
        base = model_forward(model, x)
        model.encoder = AngleEncoder.ARCTAN
        assert model_forward(model, x) != base

    def test_gradients_flow_through_arctan(self):
        rng = np.random.default_rng(44)
        config = ModelConfig(num_features=4, num_qubits=1, vqc_layers=2,
                             head_hidden=4, encoder=AngleEncoder.ARCTAN)
        model = QrnnModel.random(3, config, rng)
        X = rng.normal(size=(4, 3))
        y = rng.normal(size=4)
        grads = model_grad(model, X, y)

        def loss(params):
            probe = model.clone()
            probe.load_params(params)
            return float(np.mean((probe.forward_batch(X) - y) ** 2))

        reference = finite_diff(loss, model.params())
        assert relative_gradient_error(grads, reference) <= 1e-4
