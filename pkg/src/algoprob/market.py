"""Daily closing prices: ingestion, direction encoding, k-tuples and walks."""

import csv
import datetime as dt
import io
import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import pandas as pd

from algoprob.distribution import FrequencyDistribution, check_k, window_counts
from algoprob.errors import (
    CsvParseError,
    DataError,
    DateOrderError,
    DuplicateDateError,
    InsufficientDataError,
    ValidationError,
)

logger = logging.getLogger(__name__)

_BITS = re.compile(r"^[01]*$")


@dataclass(frozen=True)
class CsvSchema:
    """Which columns hold the date and the close, and how dates are written."""

    date_col: str = "Date"
    close_col: str = "Close"
    date_format: str = "%Y-%m-%d"


@dataclass(frozen=True)
class PricePoint:
    """One trading day."""

    date: dt.date
    close: float


@dataclass(frozen=True)
class PriceSeries:
    """Closing prices with strictly increasing dates; gaps are allowed."""

    points: tuple[PricePoint, ...]
    label: str = "series"

    def __post_init__(self) -> None:
        """Check date order and positive closes."""
        for row, point in enumerate(self.points, start=1):
            if not point.close > 0:
                msg = f"{self.label}: close must be positive, got {point.close} at row {row}"
                raise CsvParseError(msg, row)
        pairs = zip(self.points, self.points[1:], strict=False)
        for row, (before, after) in enumerate(pairs, start=2):
            if after.date == before.date:
                msg = f"{self.label}: duplicate date {after.date} at row {row}"
                raise DuplicateDateError(msg, row)
            if after.date < before.date:
                msg = f"{self.label}: date {after.date} at row {row} precedes {before.date}"
                raise DateOrderError(msg, row)

    def __len__(self) -> int:
        """Return the number of points."""
        return len(self.points)

    @property
    def closes(self) -> np.ndarray:
        """Return the closes as a float array."""
        return np.array([p.close for p in self.points], dtype=float)

    def provenance(self) -> dict[str, Any]:
        """Return the label and date range."""
        if not self.points:
            return {"label": self.label}
        return {
            "label": self.label,
            "start": self.points[0].date.isoformat(),
            "end": self.points[-1].date.isoformat(),
        }


@dataclass(frozen=True)
class BinarySequence:
    """Price directions: 1 for a rise, 0 otherwise."""

    bits: str
    provenance: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate the bits."""
        if not _BITS.match(self.bits):
            msg = f"Binary sequence must hold only 0 and 1, got {self.bits[:20]!r}"
            raise ValidationError(msg)

    def __len__(self) -> int:
        """Return the number of bits."""
        return len(self.bits)

    def as_array(self) -> np.ndarray:
        """Return the bits as a uint8 array."""
        return np.frombuffer(self.bits.encode("ascii"), dtype=np.uint8) - ord("0")


@dataclass(frozen=True)
class WalkSeries:
    """Cumulative +1/-1 walk of a binary sequence, starting at 0."""

    values: tuple[int, ...]


def _first_bad(mask: pd.Series) -> int | None:
    bad = np.flatnonzero(mask.to_numpy())
    return int(bad[0]) + 1 if bad.size else None


def ingest_csv(
    source: Path | str | TextIO,
    schema: CsvSchema | None = None,
    label: str | None = None,
) -> PriceSeries:
    """
    Read a price CSV with caller-specified columns.

    Rows must already be in date order; nothing is re-sorted.

    Args:
        source: Path, URL or open text stream.
        schema: Column names and date format (default ``Date``/``Close``/ISO dates).
        label: Market identifier (default: the file stem).

    Returns:
        The price series.

    Raises:
        DataError: If the file cannot be read or lacks the columns.
        CsvParseError: If a date or close cannot be parsed (1-based data row).
        DateOrderError: If dates go backwards; DuplicateDateError if one repeats.
    """
    schema = schema or CsvSchema()
    if label is None:
        name = getattr(source, "name", source)
        label = Path(str(name)).stem if isinstance(name, str | Path) else "series"
    try:
        frame = pd.read_csv(source, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (OSError, ValueError) as e:
        msg = f"Cannot read price CSV {label}: {e}"
        raise DataError(msg) from e

    missing = {schema.date_col, schema.close_col} - set(frame.columns)
    if missing:
        msg = f"Price CSV {label} lacks column(s) {sorted(missing)}; found {list(frame.columns)}"
        raise DataError(msg)

    dates = pd.to_datetime(
        frame[schema.date_col].str.strip(), format=schema.date_format, errors="coerce"
    )
    row = _first_bad(dates.isna())
    if row is not None:
        value = frame[schema.date_col].iloc[row - 1]
        msg = (
            f"{label}: cannot parse date {value!r} with format {schema.date_format!r} "
            f"at row {row}"
        )
        raise CsvParseError(msg, row)

    closes = pd.to_numeric(frame[schema.close_col].str.strip(), errors="coerce")
    row = _first_bad(closes.isna())
    if row is not None:
        value = frame[schema.close_col].iloc[row - 1]
        msg = f"{label}: non-numeric close {value!r} at row {row}"
        raise CsvParseError(msg, row)

    points = tuple(
        PricePoint(date.date(), float(close))
        for date, close in zip(dates, closes, strict=True)
    )
    series = PriceSeries(points, label)
    logger.info(f"Read {len(series)} prices for {label}")
    return series


def fetch_csv(url: str, schema: CsvSchema | None = None, label: str | None = None) -> PriceSeries:
    """Download a price CSV with pandas and ingest it like a local file."""
    logger.info(f"Fetching {url}")
    return ingest_csv(url, schema, label)


def restrict_dates(
    series: PriceSeries, start: dt.date | None = None, end: dt.date | None = None
) -> PriceSeries:
    """Return the points with ``start <= date <= end`` (either bound optional)."""
    points = tuple(
        p
        for p in series.points
        if (start is None or p.date >= start) and (end is None or p.date <= end)
    )
    logger.debug(f"{series.label}: kept {len(points)} of {len(series)} points in [{start}, {end}]")
    return PriceSeries(points, series.label)


def encode_directions(series: PriceSeries) -> BinarySequence:
    """
    Encode each day-to-day change as 1 for a rise and 0 otherwise.

    Equal consecutive closes encode as 0.

    Raises:
        InsufficientDataError: With fewer than 2 points.
    """
    if len(series) < 2:
        msg = f"{series.label}: need at least 2 prices to encode directions, got {len(series)}"
        raise InsufficientDataError(msg)
    rises = np.diff(series.closes) > 0
    bits = "".join("1" if rise else "0" for rise in rises)
    return BinarySequence(bits, series.provenance())


def extract_tuples(seq: BinarySequence, k: int) -> FrequencyDistribution:
    """
    Count the overlapping length-``k`` windows (step 1) of ``seq``.

    Raises:
        ValidationError: If ``k`` is outside 1..16.
        InsufficientDataError: If ``seq`` is shorter than ``k``.
    """
    check_k(k)
    if len(seq) < k:
        msg = f"Sequence of {len(seq)} bits is shorter than k={k}"
        raise InsufficientDataError(msg)
    counts = window_counts(seq.as_array()[np.newaxis, :], k)
    return FrequencyDistribution(dict(counts), {"kind": "market", "k": k, **seq.provenance})


def walk(seq: BinarySequence) -> WalkSeries:
    """
    Return the walk that steps +1 on each 1 and -1 on each 0.

    Raises:
        InsufficientDataError: If ``seq`` is empty.
    """
    if not seq.bits:
        msg = "Cannot walk an empty sequence"
        raise InsufficientDataError(msg)
    steps = 2 * seq.as_array().astype(np.int64) - 1
    return WalkSeries(tuple(int(v) for v in np.concatenate(([0], np.cumsum(steps)))))


def walk_to_csv(series: WalkSeries) -> str:
    """Render a walk as ``index,value`` CSV for plotting."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index", "value"])
    writer.writerows(enumerate(series.values))
    return buffer.getvalue()
