"""Command-line entry point: train, bench, check, eval.

The CLI is a thin shell over the library; every behavior here is reachable
through the module functions it calls. Run configuration lives in a JSON
file (schema ``qrnn-run/1``) and the few flags that matter operationally
(--seed, --out, --config) override the corresponding fields.

Exit codes:
    0  success
    1  partial success (bench finished but some tickers failed)
    2  configuration error (missing/malformed config file)
    3  data error (missing/unreadable/unusable input file)
    4  runtime error (training or evaluation failed)
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bench import ModelKind, mae, rmse, run_benchmark
from .data import DataConfig, load_csv, make_windows
from .errors import ConfigError, DataError, QridgeletError
from .oracle import run_all_checks
from .pipeline import ModelConfig, QrnnModel, load_checkpoint, save_checkpoint
from .qrnn import AngleEncoder
from .ridgelet import MotherRidgelet
from .training import Optimizer, TrainConfig, train

CONFIG_SCHEMA = "qrnn-run/1"
DEFAULT_TICKERS = ("AAPL", "SONY", "AMZN", "NVDA", "INTC", "GM")

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


@dataclass
class RunConfig:
    """Everything one experiment needs, with the seed as the single rng root."""

    seed: int = 42
    out_dir: str = "out"
    tickers: list[str] = field(default_factory=lambda: list(DEFAULT_TICKERS))
    data: DataConfig = field(default_factory=DataConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 1e-3
    optimizer: Optimizer = Optimizer.ADAM

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            seed=self.seed,
            optimizer=self.optimizer,
        )

    def to_json(self) -> str:
        payload = {
            "schema": CONFIG_SCHEMA,
            "seed": self.seed,
            "out_dir": self.out_dir,
            "tickers": list(self.tickers),
            "data": {
                "fixture_dir": self.data.fixture_dir,
                "input_dim": self.data.input_dim,
                "train_ratio": self.data.train_ratio,
            },
            "model": {
                "num_features": self.model.num_features,
                "num_qubits": self.model.num_qubits,
                "vqc_layers": self.model.vqc_layers,
                "head_hidden": self.model.head_hidden,
                "mother": self.model.mother.value,
                "encoder": self.model.encoder.value,
                "shots": self.model.shots,
            },
            "train": {
                "epochs": self.epochs,
                "batch_size": self.batch_size,
                "learning_rate": self.learning_rate,
                "optimizer": self.optimizer.value,
            },
        }
        return json.dumps(payload, indent=1)

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            payload = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if payload.get("schema") != CONFIG_SCHEMA:
            raise ConfigError(
                f"config schema must be {CONFIG_SCHEMA!r}, got {payload.get('schema')!r}"
            )
        try:
            data = payload.get("data", {})
            model = payload.get("model", {})
            tr = payload.get("train", {})
            return cls(
                seed=int(payload.get("seed", 42)),
                out_dir=str(payload.get("out_dir", "out")),
                tickers=[str(t) for t in payload.get("tickers", DEFAULT_TICKERS)],
                data=DataConfig(
                    fixture_dir=str(data.get("fixture_dir", "data/fixtures")),
                    input_dim=int(data.get("input_dim", 8)),
                    train_ratio=float(data.get("train_ratio", 0.7)),
                ),
                model=ModelConfig(
                    num_features=int(model.get("num_features", 32)),
                    num_qubits=int(model.get("num_qubits", 1)),
                    vqc_layers=int(model.get("vqc_layers", 6)),
                    head_hidden=int(model.get("head_hidden", 16)),
                    mother=MotherRidgelet(model.get("mother", "gaussian_derivative")),
                    encoder=AngleEncoder(model.get("encoder", "linear_pi")),
                    shots=model.get("shots"),
                ),
                epochs=int(tr.get("epochs", 50)),
                batch_size=int(tr.get("batch_size", 32)),
                learning_rate=float(tr.get("learning_rate", 1e-3)),
                optimizer=Optimizer(tr.get("optimizer", "adam")),
            )
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"config file {path} has an invalid field: {exc}") from exc


def _load_config(args) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.out_dir = args.out
    return config


def cmd_train(args) -> int:
    config = _load_config(args)
    series, dropped = load_csv(args.data)
    if dropped:
        print(f"dropped {dropped} unusable row(s) from {args.data}", file=sys.stderr)
    dataset = make_windows(series, config.data.input_dim, config.data.train_ratio)
    rng = np.random.default_rng(config.seed)
    model = QrnnModel.random(config.data.input_dim, config.model, rng)
    trained, history = train(model, dataset, config.train_config())

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_checkpoint(trained, out_dir / "checkpoint.json")
    history.write(out_dir / "history.csv")

    test_preds = trained.forward_batch(dataset.test_inputs)
    print(f"ticker={series.ticker} windows={len(dataset)} split={dataset.split_index}")
    print(f"test_rmse={rmse(test_preds, dataset.test_targets):.6f} "
          f"test_mae={mae(test_preds, dataset.test_targets):.6f}")
    print(f"wrote {out_dir / 'checkpoint.json'} and {out_dir / 'history.csv'}")
    return EXIT_OK


def cmd_bench(args) -> int:
    config = _load_config(args)
    report = run_benchmark(
        config.tickers,
        [ModelKind.QRNN, ModelKind.CRNN],
        config.train_config(),
        config.data,
        config.model,
    )
    out_dir = Path(config.out_dir)
    report.write(out_dir)
    print(report.to_table(), end="")
    for error in report.errors:
        print(f"error: {error.ticker}: {error.message}", file=sys.stderr)
    print(f"wrote {out_dir / 'report.csv'} and {len(report.traces)} trace file(s)")
    return EXIT_PARTIAL if report.errors else EXIT_OK


def cmd_check(args) -> int:
    reports = run_all_checks(seed=args.seed if args.seed is not None else 42)
    for report in reports:
        print(report.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_RUNTIME


def cmd_eval(args) -> int:
    model = load_checkpoint(args.checkpoint)
    series, dropped = load_csv(args.data)
    if dropped:
        print(f"dropped {dropped} unusable row(s) from {args.data}", file=sys.stderr)
    dataset = make_windows(series, model.layer.input_dim, args.train_ratio)
    train_preds = model.forward_batch(dataset.train_inputs)
    test_preds = model.forward_batch(dataset.test_inputs)
    print(f"ticker={series.ticker} windows={len(dataset)} split={dataset.split_index}")
    print(f"train_rmse={rmse(train_preds, dataset.train_targets):.6f} "
          f"train_mae={mae(train_preds, dataset.train_targets):.6f}")
    print(f"test_rmse={rmse(test_preds, dataset.test_targets):.6f} "
          f"test_mae={mae(test_preds, dataset.test_targets):.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qridgelet",
        description="Train, evaluate and benchmark quantum ridgelet forecasters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="path to a qrnn-run/1 JSON config file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="override the config output directory")

    p_train = sub.add_parser("train", help="train one model on one price file")
    add_common(p_train)
    p_train.add_argument("--data", required=True, help="CSV with Date and Close columns")
    p_train.set_defaults(func=cmd_train)

    p_bench = sub.add_parser("bench", help="run the full model comparison")
    add_common(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_check = sub.add_parser("check", help="run the mathematical self-check suite")
    p_check.add_argument("--seed", type=int, help="seed for the randomized suites")
    p_check.set_defaults(func=cmd_check)

    p_eval = sub.add_parser("eval", help="score a checkpoint on a price file")
    p_eval.add_argument("--checkpoint", required=True)
    p_eval.add_argument("--data", required=True)
    p_eval.add_argument("--train-ratio", type=float, default=0.7)
    p_eval.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FileNotFoundError, DataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except QridgeletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
