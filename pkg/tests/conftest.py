"""Shared fixtures for algoprob tests."""

import datetime as dt
from pathlib import Path

import pytest

from algoprob.config import load_settings
from algoprob.ctm import Exhaustive, compute_d_with_census
from algoprob.machine import MachineClass
from algoprob.market import PricePoint, PriceSeries

DATA_DIR = Path(__file__).parent / "data"

# D(2) over both blank tapes, probabilities rounded to a few digits.
D2_ROUNDED = {
    "0": 0.328, "1": 0.328,
    "00": 0.0834, "01": 0.0834, "10": 0.0834, "11": 0.0834,
    "001": 0.00098, "011": 0.00098, "100": 0.00098, "110": 0.00098,
    "000": 0.00065, "010": 0.00065, "101": 0.00065, "111": 0.00065,
    "0000": 0.00032, "0010": 0.00032, "0100": 0.00032, "0110": 0.00032,
    "1001": 0.00032, "1011": 0.00032, "1101": 0.00032, "1111": 0.00032,
}  # fmt: skip


@pytest.fixture(scope="session")
def settings():
    """Provide the packaged settings."""
    return load_settings()


@pytest.fixture(scope="session")
def d2_with_census(settings):
    """Provide exhaustive D(2) and its census."""
    return compute_d_with_census(MachineClass(2), Exhaustive(), settings=settings)


@pytest.fixture(scope="session")
def d2(d2_with_census):
    """Provide exhaustive D(2)."""
    return d2_with_census[0]


def make_series(closes, label="test", start=dt.date(2020, 1, 1)):
    """Build a price series with consecutive daily dates."""
    return PriceSeries(
        tuple(
            PricePoint(start + dt.timedelta(days=i), float(close)) for i, close in enumerate(closes)
        ),
        label,
    )


def write_prices(path, closes, date_col="Date", close_col="Close", start=dt.date(2020, 1, 1)):
    """Write a price CSV with consecutive ISO dates and return its path."""
    lines = [f"{date_col},{close_col}"]
    lines.extend(
        f"{(start + dt.timedelta(days=i)).isoformat()},{close}" for i, close in enumerate(closes)
    )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
