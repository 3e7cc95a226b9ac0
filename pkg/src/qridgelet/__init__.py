"""Quantum ridgelet networks for time-series forecasting.

A single-qubit circuit built from commuting y-rotations collapses into one
effective rotation, so its Pauli-Z readout equals ``cos(2 g_J(x))`` for the
classical ridgelet expansion ``g_J``. This package provides the exact
statevector simulator behind that identity, the closed-form model, the full
feature/circuit/head forecasting pipeline with parameter-shift training, and
a benchmark harness comparing it against the purely classical expansion.
"""

from .bench import BenchReport, CrnnModel, ModelKind, crnn_forward, mae, rmse, run_benchmark
from .data import (
    DataConfig,
    MinMaxScaler,
    PriceSeries,
    WindowedDataset,
    fit_scaler,
    load_csv,
    make_windows,
)
from .pipeline import (
    LinearMap,
    ModelConfig,
    PredictionHead,
    QrnnModel,
    VqcParams,
    head_forward,
    load_checkpoint,
    map_to_qubit_space,
    model_forward,
    model_grad,
    save_checkpoint,
    vqc_forward,
)
from .qrnn import (
    AngleEncoder,
    QrnnSingleQubit,
    encode_input,
    forward,
    grad_forward,
    prob_one_closed,
    qrnn_unitary,
    unit_unitary,
)
from .qubit import (
    PauliKind,
    StateVector,
    apply_cnot,
    apply_gate,
    expectation_z,
    pauli,
    prob_one,
    rx,
    ry,
    rz,
    sample_shots,
    zero_state,
)
from .ridgelet import (
    MotherRidgelet,
    RidgeletLayer,
    RidgeletUnit,
    expansion_eval,
    features,
    mother_eval,
    unit_eval,
)
from .training import TrainConfig, TrainHistory, adam_init, adam_step, mse_loss, train

__version__ = "0.1.0"
