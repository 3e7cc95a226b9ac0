#!/usr/bin/env python3
"""Regenerate the bundled price fixtures under data/fixtures/.

Each ticker gets a deterministic synthetic daily-close series shaped like a
decade of equity prices: an exponential trend times an AR(1) log deviation,
sampled on 2516 trading days between 2010-01-07 and 2019-12-31 (weekdays
minus evenly spaced synthetic holidays). Columns follow the Yahoo Finance
export layout; only Date and Close are consumed by the loader, the rest
exist so tests exercise the extra-columns-ignored path.

The fixtures are checked in; rerun this script only if the generator
parameters change, and expect every CSV to change with it.
"""
from __future__ import annotations

import math
from datetime import date, timedelta
from pathlib import Path

import numpy as np

START = date(2010, 1, 7)
END = date(2019, 12, 31)
NUM_ROWS = 2516

# ticker -> (start price, annual drift, daily vol, mean reversion, seed)
# Drifts stay modest so the chronological test region remains inside the
# price band the scaler saw; very strong trends would turn the task into
# pure extrapolation, which neither bounded model family can do.
TICKERS = {
    "AAPL": (27.0, 0.11, 0.015, 0.990, 101),
    "SONY": (29.0, 0.05, 0.016, 0.991, 202),
    "AMZN": (134.0, 0.12, 0.017, 0.989, 307),
    "NVDA": (4.6, 0.13, 0.021, 0.988, 404),
    "INTC": (20.0, 0.06, 0.014, 0.992, 505),
    "GM": (35.0, 0.03, 0.018, 0.990, 606),
}


def trading_days() -> list[date]:
    days = []
    day = START
    while day <= END:
        if day.weekday() < 5:
            days.append(day)
        day += timedelta(days=1)
    excess = len(days) - NUM_ROWS
    if excess < 0:
        raise SystemExit(f"only {len(days)} weekdays available, need {NUM_ROWS}")
    # Drop evenly spaced interior dates as synthetic holidays; endpoints stay.
    drop = {round(1 + i * (len(days) - 3) / (excess - 1)) for i in range(excess)}
    if len(drop) != excess:
        raise SystemExit("holiday indices collided; adjust the spacing rule")
    return [d for i, d in enumerate(days) if i not in drop]


def price_path(start: float, drift: float, vol: float, revert: float,
               seed: int, n: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    daily_drift = drift / 252.0
    trend = start * np.exp(daily_drift * np.arange(n))
    dev = np.empty(n)
    dev[0] = 0.0
    shocks = rng.normal(scale=vol, size=n)
    for t in range(1, n):
        dev[t] = revert * dev[t - 1] + shocks[t]
    return trend * np.exp(dev)


def main() -> None:
    out_dir = Path(__file__).resolve().parents[1] / "data" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    days = trading_days()
    assert len(days) == NUM_ROWS and days[0] == START and days[-1] == END
    for ticker, (start, drift, vol, revert, seed) in TICKERS.items():
        closes = price_path(start, drift, vol, revert, seed, NUM_ROWS)
        rng = np.random.default_rng(seed + 7)
        spreads = np.abs(rng.normal(scale=0.004, size=NUM_ROWS))
        volumes = rng.integers(1_000_000, 60_000_000, size=NUM_ROWS)
        lines = ["Date,Open,High,Low,Close,Adj Close,Volume"]
        for i, day in enumerate(days):
            c = closes[i]
            o = c * (1.0 + rng.normal(scale=0.003))
            hi = max(o, c) * (1.0 + spreads[i])
            lo = min(o, c) * (1.0 - spreads[i])
            lines.append(
                f"{day.isoformat()},{o:.6f},{hi:.6f},{lo:.6f},{c:.6f},{c:.6f},{volumes[i]}"
            )
        (out_dir / f"{ticker}.csv").write_text("\n".join(lines) + "\n")
        print(f"{ticker}: {NUM_ROWS} rows, close {closes[0]:.2f} -> {closes[-1]:.2f}")
    print(f"wrote {len(TICKERS)} fixtures to {out_dir}")


if __name__ == "__main__":
    main()
