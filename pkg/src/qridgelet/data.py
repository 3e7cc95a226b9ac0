"""Price-series ingestion, normalization, windowing, chronological splitting.

Input files are Yahoo-Finance-style CSV exports: a header row containing at
least ``Date`` (ISO-8601) and ``Close`` (decimal), any extra columns ignored.
Rows whose close is missing, non-numeric, non-finite or non-positive are
dropped and counted rather than failing the load.

The min-max scaler is fitted on the raw closes touched by training windows
and their targets only, so nothing from the test region ever leaks into
normalization. Windows are one-step-ahead: ``e`` consecutive normalized
closes predict the next one.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import (
    DataError,
    DegenerateScaleError,
    EmptySeriesError,
    InvalidParameterError,
    MissingColumnError,
)


@dataclass
class PriceSeries:
    ticker: str
    dates: list[date]
    closes: np.ndarray

    def __post_init__(self):
        self.closes = np.asarray(self.closes, dtype=float)
        if len(self.dates) != self.closes.shape[0]:
            raise DataError("dates and closes must have equal length")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise DataError(f"dates must be strictly increasing, saw {prev} then {cur}")

    def __len__(self) -> int:
        return self.closes.shape[0]


def load_csv(path, ticker: str | None = None) -> tuple[PriceSeries, int]:
    """Parse one price file; returns (series, dropped-row count).

    Raises FileNotFoundError, MissingColumnError or EmptySeriesError.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"price file not found: {path}")
    ticker = ticker if ticker is not None else path.stem
    rows: list[tuple[date, float]] = []
    dropped = 0
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptySeriesError(f"{path} has no header row")
        fields = {name.strip(): name for name in reader.fieldnames}
        if "Date" not in fields or "Close" not in fields:
            raise MissingColumnError(
                f"{path} must contain Date and Close columns, found {reader.fieldnames}"
            )
        for row in reader:
            raw_date = (row.get(fields["Date"]) or "").strip()
            raw_close = (row.get(fields["Close"]) or "").strip()
            try:
                day = date.fromisoformat(raw_date)
                close = float(raw_close)
            except ValueError:
                dropped += 1
                continue
            if not math.isfinite(close) or close <= 0.0:
                dropped += 1
                continue
            rows.append((day, close))
    if not rows:
        raise EmptySeriesError(f"{path} contains no usable rows")
    rows.sort(key=lambda item: item[0])
    dates = [d for d, _ in rows]
    closes = np.array([c for _, c in rows])
    return PriceSeries(ticker, dates, closes), dropped


@dataclass
class MinMaxScaler:
    """Affine map of [minimum, maximum] onto [0, 1], fitted on training data only."""

    minimum: float
    maximum: float

    def __post_init__(self):
        if not self.maximum > self.minimum:
            raise DegenerateScaleError(
                f"max ({self.maximum!r}) must exceed min ({self.minimum!r})"
            )

    def transform(self, values):
        return (np.asarray(values, dtype=float) - self.minimum) / (self.maximum - self.minimum)

    def inverse(self, values):
        return np.asarray(values, dtype=float) * (self.maximum - self.minimum) + self.minimum


def fit_scaler(closes: np.ndarray, train_len: int) -> MinMaxScaler:
    """Min/max over ``closes[:train_len]`` only; the test region never leaks in."""
    if train_len < 2:
        raise InvalidParameterError(f"need at least 2 training values, got {train_len}")
    region = np.asarray(closes, dtype=float)[:train_len]
    return MinMaxScaler(float(region.min()), float(region.max()))


@dataclass
class WindowedDataset:
    """Sliding-window pairs: inputs (N, e) and next-step targets (N,)."""

    inputs: np.ndarray
    targets: np.ndarray
    split_index: int
    scaler: MinMaxScaler

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        self.targets = np.asarray(self.targets, dtype=float)

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def train_inputs(self):
        return self.inputs[:self.split_index]

    @property
    def train_targets(self):
        return self.targets[:self.split_index]

    @property
    def test_inputs(self):
        return self.inputs[self.split_index:]

    @property
    def test_targets(self):
        return self.targets[self.split_index:]


def make_windows(series: PriceSeries, input_dim: int, train_ratio: float = 0.7) -> WindowedDataset:
    """All N - e sliding windows of a length-N series, split chronologically."""
    e = int(input_dim)
    if e < 1:
        raise InvalidParameterError("input_dim must be >= 1")
    if not 0.0 < train_ratio < 1.0:
        raise InvalidParameterError("train_ratio must lie strictly between 0 and 1")
    n = len(series)
    if n < e + 2:
        raise InvalidParameterError(
            f"series of length {n} is too short for windows of {e} plus a target"
        )
    num_windows = n - e
    split_index = int(math.floor(train_ratio * num_windows))
    scaler = fit_scaler(series.closes, split_index + e)
    normalized = scaler.transform(series.closes)
    inputs = np.stack([normalized[i:i + e] for i in range(num_windows)])
    targets = normalized[e:]
    return WindowedDataset(inputs, targets, split_index, scaler)


@dataclass
class DataConfig:
    """Where fixtures live and how windows are cut."""

    fixture_dir: str = "data/fixtures"
    input_dim: int = 8
    train_ratio: float = 0.7
