"""String frequency distributions and their CSV/JSON file formats.

A :class:`FrequencyDistribution` is the common currency of the package: D(n)
from Turing machines, k-tuple counts from cellular automata and k-tuple
counts from binarised price series are all instances of it.

CSV layout (one header line, rows in rank order)::

    string,count,probability
    0,2000,0.328515111695

JSON layout::

    {"format": "algoprob-distribution", "version": 1,
     "source": {...}, "total": 6088, "runs": 20000, "counts": {"0": 2000, ...}}
"""

import csv
import io
import json
import logging
import re
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from algoprob.errors import DataError, ValidationError

logger = logging.getLogger(__name__)

FORMAT_NAME = "algoprob-distribution"
FORMAT_VERSION = 1
MAX_K = 16

_BITS = re.compile(r"^[01]+$")


class Normalization(Enum):
    """Denominator used to turn counts into probabilities."""

    HALTING = "halting"  # sum of counts (halting runs, or windows)
    ALL_RUNS = "all-runs"  # every run, halting or not


@dataclass(frozen=True)
class FrequencyDistribution:
    """Immutable map from bit strings to occurrence counts.

    Attributes:
        counts: Occurrences per string; every stored count is >= 1.
        source: Descriptor of how the counts were produced.
        runs: Number of runs behind the counts when some runs produce nothing
            (non-halting machines); None when every run contributes a count.
    """

    counts: Mapping[str, int]
    source: Mapping[str, Any] = field(default_factory=dict)
    runs: int | None = None

    def __post_init__(self) -> None:
        """Validate keys and counts."""
        for string, count in self.counts.items():
            if not _BITS.match(string):
                msg = f"Distribution keys must be bit strings, got {string!r}"
                raise ValidationError(msg)
            if not isinstance(count, int) or count < 1:
                msg = f"Count for {string!r} must be a positive integer, got {count!r}"
                raise ValidationError(msg)
        if self.runs is not None and self.runs < self.total:
            msg = f"runs ({self.runs}) cannot be smaller than the total count ({self.total})"
            raise ValidationError(msg)

    @property
    def total(self) -> int:
        """Return the sum of all counts."""
        return sum(self.counts.values())

    def __len__(self) -> int:
        """Return the support size."""
        return len(self.counts)

    def __contains__(self, string: object) -> bool:
        """Return True if ``string`` is in the support."""
        return string in self.counts

    @property
    def support(self) -> tuple[str, ...]:
        """Return the support sorted by length, then lexicographically."""
        return tuple(sorted(self.counts, key=lambda s: (len(s), s)))

    def _denominator(self, normalization: Normalization) -> int:
        if normalization is Normalization.ALL_RUNS:
            return self.runs if self.runs is not None else self.total
        return self.total

    def probability(
        self, string: str, normalization: Normalization = Normalization.HALTING
    ) -> Fraction:
        """Return the exact probability of ``string`` (0 if absent)."""
        return Fraction(self.counts.get(string, 0), self._denominator(normalization))

    def probabilities(
        self, normalization: Normalization = Normalization.HALTING
    ) -> dict[str, Fraction]:
        """Return exact probabilities for the whole support."""
        denominator = self._denominator(normalization)
        return {s: Fraction(c, denominator) for s, c in self.counts.items()}

    def float_probabilities(
        self, normalization: Normalization = Normalization.HALTING
    ) -> dict[str, float]:
        """Return the floating view of :meth:`probabilities`."""
        denominator = self._denominator(normalization)
        return {s: c / denominator for s, c in self.counts.items()}

    @property
    def min_probability(self) -> float:
        """Return the smallest probability in the support (0.0 if empty)."""
        if not self.counts:
            return 0.0
        return min(self.counts.values()) / self.total

    def ranked_items(self) -> list[tuple[str, int]]:
        """Return ``(string, count)`` by descending count, then shorter, then lexicographic."""
        return sorted(self.counts.items(), key=lambda item: (-item[1], len(item[0]), item[0]))

    def restrict(self, k: int) -> "FrequencyDistribution":
        """Return the sub-distribution of strings of length ``k``."""
        return FrequencyDistribution(
            {s: c for s, c in self.counts.items() if len(s) == k},
            {**self.source, "restricted_to_length": k},
        )

    def merge(self, other: "FrequencyDistribution") -> "FrequencyDistribution":
        """Add counts (and runs) of two distributions; commutative and associative."""
        runs = None
        if self.runs is not None or other.runs is not None:
            runs = (self.runs if self.runs is not None else self.total) + (
                other.runs if other.runs is not None else other.total
            )
        return FrequencyDistribution(
            dict(Counter(self.counts) + Counter(other.counts)), self.source, runs
        )

    def to_dict(self) -> dict[str, Any]:
        """Return the JSON document for this distribution."""
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "source": dict(self.source),
            "total": self.total,
            "runs": self.runs,
            "counts": dict(sorted(self.counts.items(), key=lambda item: (len(item[0]), item[0]))),
        }


def check_k(k: int) -> None:
    """Raise ValidationError unless ``1 <= k <= 16``."""
    if not isinstance(k, int) or not 1 <= k <= MAX_K:
        msg = f"Tuple length k must be in 1..{MAX_K}, got {k!r}"
        raise ValidationError(msg)


def window_counts(rows: np.ndarray, k: int) -> Counter[str]:
    """
    Count overlapping length-``k`` windows (step 1) along each row.

    Args:
        rows: 2-D array of bits; windows never cross row boundaries.
        k: Window length.

    Returns:
        Counts per k-bit string.
    """
    check_k(k)
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    if rows.shape[1] < k:
        return Counter()
    windows = sliding_window_view(rows, k, axis=1).reshape(-1, k)
    weights = np.int64(1) << np.arange(k - 1, -1, -1, dtype=np.int64)
    tally = np.bincount(windows @ weights, minlength=1 << k)
    return Counter(
        {format(int(code), f"0{k}b"): int(tally[code]) for code in np.flatnonzero(tally)}
    )


def uniform_distribution(k: int) -> FrequencyDistribution:
    """Return the distribution giving every k-bit string count 1."""
    check_k(k)
    return FrequencyDistribution(
        {format(code, f"0{k}b"): 1 for code in range(1 << k)}, {"kind": "uniform", "k": k}
    )


def to_csv(distribution: FrequencyDistribution) -> str:
    """Render ``distribution`` in the CSV layout."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["string", "count", "probability"])
    total = distribution.total
    for string, count in distribution.ranked_items():
        writer.writerow([string, count, f"{count / total:.12f}"])
    return buffer.getvalue()


def to_json(distribution: FrequencyDistribution) -> str:
    """Render ``distribution`` in the JSON layout."""
    return json.dumps(distribution.to_dict(), indent=2, sort_keys=True) + "\n"


def from_dict(document: Mapping[str, Any]) -> FrequencyDistribution:
    """
    Rebuild a distribution from its JSON document.

    Raises:
        DataError: If the document is not a distribution file.
    """
    if document.get("format") != FORMAT_NAME:
        msg = f"Not an {FORMAT_NAME} document (format={document.get('format')!r})"
        raise DataError(msg)
    try:
        counts = {str(s): int(c) for s, c in document["counts"].items()}
        return FrequencyDistribution(counts, document.get("source", {}), document.get("runs"))
    except (KeyError, TypeError, ValueError) as e:
        msg = f"Malformed distribution document: {e}"
        raise DataError(msg) from e


def read_csv(source: Path | TextIO) -> FrequencyDistribution:
    """
    Read a distribution CSV (only the ``string`` and ``count`` columns are used).

    Raises:
        DataError: If the file lacks the columns or holds invalid rows.
    """
    try:
        frame = pd.read_csv(source, dtype={"string": str, "count": "Int64"})
    except (ValueError, OSError) as e:
        msg = f"Cannot read distribution CSV: {e}"
        raise DataError(msg) from e
    if not {"string", "count"} <= set(frame.columns):
        msg = f"Distribution CSV needs 'string' and 'count' columns, got {list(frame.columns)}"
        raise DataError(msg)
    name = getattr(source, "name", str(source))
    try:
        return FrequencyDistribution(
            {str(s): int(c) for s, c in zip(frame["string"], frame["count"], strict=True)},
            {"kind": "file", "path": str(name)},
        )
    except (TypeError, ValueError) as e:
        msg = f"Invalid distribution row: {e}"
        raise DataError(msg) from e


def load(path: Path) -> FrequencyDistribution:
    """Load a distribution from a ``.json`` or ``.csv`` file."""
    if path.suffix.lower() == ".json":
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            msg = f"Cannot read distribution {path}: {e}"
            raise DataError(msg) from e
        return from_dict(document)
    return read_csv(path)


def merge_all(distributions: Iterable[FrequencyDistribution]) -> FrequencyDistribution:
    """Merge any number of distributions (empty input gives an empty one)."""
    merged = FrequencyDistribution({})
    for distribution in distributions:
        empty = not merged.counts and merged.runs is None
        merged = distribution if empty else merged.merge(distribution)
    return merged
