"""Alignment of frequency distributions and tie-corrected Spearman correlation.

Comparison cells are reported as ``rho|n``: the rank correlation and the number
of aligned strings behind it.
"""

import csv
import io
import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from scipy.stats import rankdata

from algoprob.distribution import FrequencyDistribution, check_k
from algoprob.errors import AlignmentError, InsufficientDataError, ValidationError
from algoprob.market import BinarySequence, extract_tuples

logger = logging.getLogger(__name__)

MIN_PAIRS = 3


class AlignmentPolicy(Enum):
    """Which strings two distributions are compared on."""

    INTERSECTION = "intersection"
    UNION_ZERO_FILL = "union-zero-fill"


@dataclass(frozen=True)
class AlignedPair:
    """Counts of the same strings in two distributions, in lexicographic order."""

    strings: tuple[str, ...]
    xs: tuple[int, ...]
    ys: tuple[int, ...]
    policy: AlignmentPolicy = AlignmentPolicy.INTERSECTION

    def __post_init__(self) -> None:
        """Check the shape and, for intersections, that every count is positive."""
        if not len(self.strings) == len(self.xs) == len(self.ys):
            msg = (
                f"Aligned lengths differ: {len(self.strings)} strings, "
                f"{len(self.xs)} xs, {len(self.ys)} ys"
            )
            raise ValidationError(msg)
        if self.policy is AlignmentPolicy.INTERSECTION and (
            min(self.xs, default=1) <= 0 or min(self.ys, default=1) <= 0
        ):
            msg = "Intersection alignment cannot hold zero counts"
            raise ValidationError(msg)

    def __len__(self) -> int:
        """Return the number of aligned strings."""
        return len(self.strings)


@dataclass(frozen=True)
class SpearmanResult:
    """Rank correlation over ``n`` pairs; ``rho`` is None when one side is all tied."""

    rho: float | None
    n: int
    degenerate: bool = False

    def cell(self) -> str:
        """Return the ``rho|n`` cell."""
        rho = "degenerate" if self.rho is None else f"{self.rho:.2f}"
        return f"{rho}|{self.n}"


@dataclass(frozen=True)
class CompareRow:
    """One k of a comparison table; ``result`` is None when the cell is absent."""

    k: int
    result: SpearmanResult | None
    reason: str = ""

    def cell(self) -> str:
        """Return the ``rho|n`` cell, or ``-`` for an absent one."""
        return self.result.cell() if self.result is not None else "-"

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready dict."""
        return {
            "k": self.k,
            "rho": None if self.result is None else self.result.rho,
            "n": None if self.result is None else self.result.n,
            "reason": self.reason,
        }


def align(
    a: FrequencyDistribution,
    b: FrequencyDistribution,
    k: int,
    policy: AlignmentPolicy = AlignmentPolicy.INTERSECTION,
) -> AlignedPair:
    """
    Align the length-``k`` strings of two distributions.

    Args:
        a: First distribution (gives ``xs``).
        b: Second distribution (gives ``ys``).
        k: String length to compare on.
        policy: Keep strings present in both, or all strings present in either
            with 0 for the absent side.

    Returns:
        The aligned counts, strings in lexicographic order.

    Raises:
        AlignmentError: If no string survives the alignment.
    """
    check_k(k)
    xs = a.restrict(k).counts
    ys = b.restrict(k).counts
    if policy is AlignmentPolicy.INTERSECTION:
        strings = sorted(xs.keys() & ys.keys())
    else:
        strings = sorted(xs.keys() | ys.keys())
    if not strings:
        msg = (
            f"Nothing to align at k={k} ({policy.value}): "
            f"first support has {len(xs)} strings, second has {len(ys)}"
        )
        raise AlignmentError(msg)
    return AlignedPair(
        tuple(strings),
        tuple(xs.get(s, 0) for s in strings),
        tuple(ys.get(s, 0) for s in strings),
        policy,
    )


def rank_correlation(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """
    Spearman rho with averaged ranks for ties.

    rho is the product-moment correlation of the two rank vectors.

    Returns:
        rho in [-1, 1], or None if either side has all values tied.
    """
    rx = rankdata(xs, method="average")
    ry = rankdata(ys, method="average")
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        return None
    return float(np.clip(np.corrcoef(rx, ry)[0, 1], -1.0, 1.0))


def spearman(pair: AlignedPair) -> SpearmanResult:
    """
    Rank-correlate an aligned pair.

    Raises:
        InsufficientDataError: With fewer than 3 pairs.
    """
    if len(pair) < MIN_PAIRS:
        msg = f"Spearman needs at least {MIN_PAIRS} pairs, got {len(pair)}"
        raise InsufficientDataError(msg)
    rho = rank_correlation(pair.xs, pair.ys)
    return SpearmanResult(rho, len(pair), degenerate=rho is None)


def compare_table(
    market: BinarySequence,
    reference: FrequencyDistribution,
    k_range: Iterable[int],
    policy: AlignmentPolicy = AlignmentPolicy.INTERSECTION,
) -> list[CompareRow]:
    """
    Correlate a market's k-tuple frequencies with a reference, one row per k.

    Args:
        market: Binarised price directions.
        reference: Distribution holding strings of every requested length.
        k_range: Tuple lengths.
        policy: Alignment policy.

    Returns:
        One row per k; cells that cannot be computed carry a reason instead.
    """
    return [
        _compare_row(lambda k: extract_tuples(market, k), reference, k, policy) for k in k_range
    ]


def compare_distributions(
    a: FrequencyDistribution,
    b: FrequencyDistribution,
    k_range: Iterable[int],
    policy: AlignmentPolicy = AlignmentPolicy.INTERSECTION,
) -> list[CompareRow]:
    """Correlate two multi-length distributions on their length-k strings, one row per k."""
    return [_compare_row(lambda _: a, b, k, policy) for k in k_range]


def _compare_row(
    first: Callable[[int], FrequencyDistribution],
    reference: FrequencyDistribution,
    k: int,
    policy: AlignmentPolicy,
) -> CompareRow:
    try:
        result = spearman(align(first(k), reference, k, policy))
    except (AlignmentError, InsufficientDataError) as e:
        logger.warning(f"k={k}: no correlation ({e})")
        return CompareRow(k, None, str(e))
    logger.debug(f"k={k}: {result.cell()}")
    return CompareRow(k, result, "one side has all counts tied" if result.degenerate else "")


def compare_markets(
    markets: Mapping[str, BinarySequence],
    reference: FrequencyDistribution,
    k_range: Sequence[int],
    policy: AlignmentPolicy = AlignmentPolicy.INTERSECTION,
) -> dict[str, list[CompareRow]]:
    """Run :func:`compare_table` for each labelled market."""
    return {
        label: compare_table(seq, reference, k_range, policy) for label, seq in markets.items()
    }


def format_table_text(table: Mapping[str, Sequence[CompareRow]]) -> str:
    """Render market rows by k columns of ``rho|n`` cells."""
    ks = sorted({row.k for rows in table.values() for row in rows})
    header = ["market", *(f"k={k}" for k in ks)]
    body = []
    for label, rows in table.items():
        cells = {row.k: row.cell() for row in rows}
        body.append([label, *(cells.get(k, "-") for k in ks)])
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(line, widths, strict=True))
        for line in [header, *body]
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def to_compare_csv(table: Mapping[str, Sequence[CompareRow]]) -> str:
    """
    Render the table as CSV.

    Columns are ``k,rho,n,reason``, with a leading ``market`` column when more
    than one market is present. Absent cells leave ``rho`` and ``n`` empty.
    """
    labelled = len(table) > 1
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*(["market"] if labelled else []), "k", "rho", "n", "reason"])
    for label, rows in table.items():
        for row in rows:
            rho = "" if row.result is None or row.result.rho is None else f"{row.result.rho:.12f}"
            n = "" if row.result is None else row.result.n
            writer.writerow([*([label] if labelled else []), row.k, rho, n, row.reason])
    return buffer.getvalue()
