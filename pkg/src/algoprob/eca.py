"""Elementary cellular automata and their k-tuple reference distributions."""

import logging
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from algoprob.distribution import FrequencyDistribution, check_k, window_counts
from algoprob.errors import ValidationError

logger = logging.getLogger(__name__)


class Boundary(Enum):
    """What lies beyond the first and last cell."""

    CYCLIC = "cyclic"
    FIXED_ZERO = "fixed-0"


class InitMode(Enum):
    """Initial row."""

    SINGLE = "single"  # one 1 in the middle cell
    RANDOM = "random"  # seeded Bernoulli(density) row


class Slicing(Enum):
    """Direction in which evolutions are cut into k-tuples."""

    ROWS = "rows"
    COLUMNS = "columns"


@dataclass(frozen=True)
class EcaConfig:
    """Parameters of one ECA run."""

    rule: int
    width: int
    steps: int
    boundary: Boundary = Boundary.CYCLIC
    init: InitMode = InitMode.SINGLE
    seed: int = 0
    density: float = 0.5

    def __post_init__(self) -> None:
        """Validate the parameters."""
        if not isinstance(self.rule, int) or not 0 <= self.rule <= 255:
            msg = f"ECA rule must be in 0..255, got {self.rule!r}"
            raise ValidationError(msg)
        if self.width < 3 or self.steps < 1:
            msg = f"ECA needs width >= 3 and steps >= 1, got width={self.width}, steps={self.steps}"
            raise ValidationError(msg)
        if not 0.0 <= self.density <= 1.0:
            msg = f"density must be in [0, 1], got {self.density}"
            raise ValidationError(msg)


@dataclass(frozen=True)
class Evolution:
    """``steps + 1`` rows of ``width`` cells; row 0 is the initial condition."""

    rows: np.ndarray
    config: EcaConfig

    @property
    def height(self) -> int:
        """Return the number of rows."""
        return int(self.rows.shape[0])


def rule_table(rule: int) -> np.ndarray:
    """Return the 8-entry local map; entry ``4l + 2c + r`` is the new centre cell."""
    return ((rule >> np.arange(8)) & 1).astype(np.uint8)


def complement_rule(rule: int) -> int:
    """Return the rule whose evolutions are the bitwise complements of ``rule``'s."""
    table = rule_table(rule)
    return int(sum((1 - int(table[7 - i])) << i for i in range(8)))


def initial_row(config: EcaConfig) -> np.ndarray:
    """Build row 0 for ``config``."""
    if config.init is InitMode.RANDOM:
        rng = np.random.default_rng(config.seed)
        return (rng.random(config.width) < config.density).astype(np.uint8)
    row = np.zeros(config.width, dtype=np.uint8)
    row[config.width // 2] = 1
    return row


def evolve(config: EcaConfig, initial: np.ndarray | None = None) -> Evolution:
    """
    Run ``config.steps`` updates from ``initial`` (default: :func:`initial_row`).

    Args:
        config: Rule, size and boundary.
        initial: Optional explicit row 0 of length ``config.width``.

    Returns:
        The full evolution.
    """
    table = rule_table(config.rule)
    row = initial_row(config) if initial is None else np.asarray(initial, dtype=np.uint8)
    if row.shape != (config.width,):
        msg = f"initial row must have {config.width} cells, got shape {row.shape}"
        raise ValidationError(msg)

    rows = np.empty((config.steps + 1, config.width), dtype=np.uint8)
    rows[0] = row
    for t in range(config.steps):
        current = rows[t]
        if config.boundary is Boundary.CYCLIC:
            left, right = np.roll(current, 1), np.roll(current, -1)
        else:
            padded = np.pad(current, 1)
            left, right = padded[:-2], padded[2:]
        rows[t + 1] = table[4 * left + 2 * current + right]
    return Evolution(rows, config)


def central_column(rule: int, steps: int) -> str:
    """
    Return the column of the initially lit cell over rows ``0 .. steps``.

    The width is ``2*steps + 3`` with a fixed-0 boundary, so the light cone never
    reaches the edge.
    """
    if steps < 1:
        msg = f"steps must be >= 1, got {steps}"
        raise ValidationError(msg)
    config = EcaConfig(rule, 2 * steps + 3, steps, Boundary.FIXED_ZERO, InitMode.SINGLE)
    column = evolve(config).rows[:, config.width // 2]
    return "".join(map(str, column.tolist()))


def rule30_frequency(bits: str) -> float:
    """Return the fraction of 1s in ``bits``."""
    return bits.count("1") / len(bits) if bits else 0.0


def _tuples(evolution: Evolution, k: int, slicing: Slicing) -> Counter[str]:
    rows = evolution.rows if slicing is Slicing.ROWS else evolution.rows.T
    return window_counts(rows, k)


def eca_tuple_distribution(
    rules: Iterable[int],
    k: int,
    template: EcaConfig,
    slicing: Slicing = Slicing.ROWS,
    with_complements: bool = False,
) -> FrequencyDistribution:
    """
    Aggregate k-tuple counts over the evolutions of several rules.

    Args:
        rules: Rule numbers to evolve (each with ``template``'s other parameters).
        k: Tuple length, 1..16.
        template: Width, steps, boundary and initial condition shared by all rules.
        slicing: Cut rows (default) or columns into overlapping windows.
        with_complements: Also evolve each rule's complement from the
            complemented initial row.

    Returns:
        Counts aggregated over all rows and rules.
    """
    check_k(k)
    rules = sorted(set(rules))
    if not rules:
        msg = "At least one ECA rule is required"
        raise ValidationError(msg)

    counts: Counter[str] = Counter()
    for rule in rules:
        config = replace(template, rule=rule)
        evolution = evolve(config)
        counts += _tuples(evolution, k, slicing)
        if with_complements:
            twin = replace(template, rule=complement_rule(rule))
            counts += _tuples(evolve(twin, 1 - evolution.rows[0]), k, slicing)

    source = {
        "kind": "eca",
        "rules": "all" if rules == list(range(256)) else rules,
        "k": k,
        "width": template.width,
        "steps": template.steps,
        "boundary": template.boundary.value,
        "init": template.init.value,
        "slicing": slicing.value,
        "with_complements": with_complements,
    }
    if template.init is InitMode.RANDOM:
        source.update(seed=template.seed, density=template.density)
    logger.debug(f"ECA {k}-tuple distribution over {len(rules)} rules: {len(counts)} strings")
    return FrequencyDistribution(dict(counts), source)


def to_pbm(evolution: Evolution) -> str:
    """Render the evolution as a plain (P1) portable bitmap; 1 is black."""
    lines = ["P1", f"{evolution.rows.shape[1]} {evolution.height}"]
    lines.extend(" ".join(map(str, row.tolist())) for row in evolution.rows)
    return "\n".join(lines) + "\n"
