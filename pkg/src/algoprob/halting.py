"""Halting censuses, Busy Beaver values and runtime cutoffs for (n,2) machines."""

import logging
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any

import numpy as np

from algoprob.batch import ALL_DETECTORS, NonHaltDetector, RunStatus, random_digits, run_batch
from algoprob.config import Settings, load_settings
from algoprob.errors import BudgetExceededError, ValidationError
from algoprob.machine import BlankMode, Halted, MachineClass, simulate, table_from_digits
from algoprob.parallel import ShardResult, execute, plan_exhaustive

logger = logging.getLogger(__name__)

DEFAULT_SCHEDULE = tuple(2**i for i in range(12))


class BeaverStatus(Enum):
    """Whether a Busy Beaver record is final."""

    EXACT = "exact"
    LOWER_BOUND = "lower-bound"


@dataclass(frozen=True)
class CensusReport:
    """Classification of every run of a machine class at one cutoff.

    Counts are counts of runs; with ``BlankMode.BOTH`` every machine is run twice,
    so ``runs == 2 * total_machines``.
    """

    n: int
    blank_mode: BlankMode
    total_machines: int
    runs: int
    halting: int
    non_halting_proven: int
    unresolved: int
    cutoff_used: int
    cutoff_provenance: str
    max_steps_observed: int
    max_ones_observed: int
    detectors: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        """Check the census invariants."""
        if self.halting + self.non_halting_proven + self.unresolved != self.runs:
            msg = (
                f"Census does not add up: {self.halting} + {self.non_halting_proven} + "
                f"{self.unresolved} != {self.runs}"
            )
            raise ValidationError(msg)
        if self.max_steps_observed > self.cutoff_used:
            msg = f"max_steps_observed {self.max_steps_observed} exceeds cutoff {self.cutoff_used}"
            raise ValidationError(msg)

    @property
    def machine_class(self) -> MachineClass:
        """Return the census's machine class."""
        return MachineClass(self.n)

    def merge(self, other: "CensusReport") -> "CensusReport":
        """
        Combine reports over disjoint parts of the same class and cutoff.

        Raises:
            ValidationError: If the reports describe different experiments.
        """
        if (self.n, self.blank_mode, self.cutoff_used, self.detectors) != (
            other.n,
            other.blank_mode,
            other.cutoff_used,
            other.detectors,
        ):
            msg = "Only reports of the same class, blank mode, cutoff and detectors can merge"
            raise ValidationError(msg)
        return CensusReport(
            n=self.n,
            blank_mode=self.blank_mode,
            total_machines=self.total_machines + other.total_machines,
            runs=self.runs + other.runs,
            halting=self.halting + other.halting,
            non_halting_proven=self.non_halting_proven + other.non_halting_proven,
            unresolved=self.unresolved + other.unresolved,
            cutoff_used=self.cutoff_used,
            cutoff_provenance=self.cutoff_provenance,
            max_steps_observed=max(self.max_steps_observed, other.max_steps_observed),
            max_ones_observed=max(self.max_ones_observed, other.max_ones_observed),
            detectors=self.detectors,
        )

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready dict with every field."""
        data = asdict(self)
        data["blank_mode"] = self.blank_mode.value
        data["detectors"] = list(self.detectors)
        return data

    def __str__(self) -> str:
        """Return a one-line summary."""
        return (
            f"Census {self.machine_class} blank={self.blank_mode.value} cutoff={self.cutoff_used}: "
            f"{self.runs} runs of {self.total_machines} machines, {self.halting} halting, "
            f"{self.non_halting_proven} proven non-halting, {self.unresolved} unresolved, "
            f"max steps {self.max_steps_observed}, max ones {self.max_ones_observed}"
        )


@dataclass(frozen=True)
class BusyBeaverRecord:
    """Σ(n,2) and S(n,2) as established by escalating censuses."""

    n: int
    sigma: int
    s_max: int
    status: BeaverStatus
    cutoffs_visited: tuple[int, ...] = ()
    halting: int = 0

    def __post_init__(self) -> None:
        """A machine leaving k ones has taken at least k steps."""
        if self.s_max < self.sigma:
            msg = f"S ({self.s_max}) cannot be smaller than Sigma ({self.sigma})"
            raise ValidationError(msg)

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready dict with every field."""
        data = asdict(self)
        data["status"] = self.status.value
        data["cutoffs_visited"] = list(self.cutoffs_visited)
        return data


def cutoff_for(machine_class: MachineClass, settings: Settings | None = None) -> int:
    """
    Return the runtime cutoff for ``machine_class``.

    S(n,2) from the config when it is known (n <= 4), else the configured
    educated-guess cap.
    """
    settings = settings or load_settings()
    return settings.bb_steps.get(machine_class.n, settings.educated_guess)


def cutoff_provenance(machine_class: MachineClass, settings: Settings | None = None) -> str:
    """Return ``derived``, ``published`` or ``educated-guess`` for the class's cutoff."""
    settings = settings or load_settings()
    return settings.bb_provenance.get(machine_class.n, "educated-guess")


def check_budget(machine_class: MachineClass, budget: int) -> None:
    """
    Refuse exhaustive enumeration of classes larger than ``budget`` machines.

    Raises:
        BudgetExceededError: If the rulespace exceeds the budget.
    """
    size = machine_class.rulespace_size
    if size > budget:
        msg = (
            f"{machine_class} has {size} machines, over the exhaustive budget of {budget}; "
            "use sampled mode or raise --budget explicitly"
        )
        raise BudgetExceededError(msg, rulespace_size=size)


def census_from(
    result: ShardResult,
    machine_class: MachineClass,
    blank_mode: BlankMode,
    cutoff: int,
    provenance: str,
    detectors: frozenset[NonHaltDetector],
) -> CensusReport:
    """Turn a merged shard result into a report."""
    return CensusReport(
        n=machine_class.n,
        blank_mode=blank_mode,
        total_machines=result.machines,
        runs=result.runs,
        halting=result.halting,
        non_halting_proven=result.non_halting_proven,
        unresolved=result.unresolved,
        cutoff_used=cutoff,
        cutoff_provenance=provenance,
        max_steps_observed=result.max_steps,
        max_ones_observed=result.max_ones,
        detectors=tuple(sorted(d.value for d in detectors)),
    )


def run_census(
    machine_class: MachineClass,
    cutoff: int,
    nonhalt_detectors: frozenset[NonHaltDetector] = ALL_DETECTORS,
    blank_mode: BlankMode = BlankMode.ZERO,
    workers: int = 1,
    settings: Settings | None = None,
    budget: int | None = None,
) -> CensusReport:
    """
    Simulate every machine of ``machine_class`` once per blank.

    Args:
        machine_class: The class to enumerate.
        cutoff: Step cap per run.
        nonhalt_detectors: Detectors that may reclassify cutoff-hitters.
        blank_mode: Blank tape(s) to start from.
        workers: Worker processes; never changes the report.
        settings: Loaded config (default: packaged file).
        budget: Exhaustive budget override.

    Returns:
        The census report.

    Raises:
        ValidationError: If ``cutoff`` < 1.
        BudgetExceededError: If the class is too large for exhaustive mode.
    """
    if cutoff < 1:
        msg = f"cutoff must be >= 1, got {cutoff}"
        raise ValidationError(msg)
    settings = settings or load_settings()
    check_budget(machine_class, budget or settings.exhaustive_budget)

    logger.info(f"Census of {machine_class} at cutoff {cutoff} (blank {blank_mode.value})")
    shards = plan_exhaustive(
        machine_class.n, cutoff, blank_mode.blanks, nonhalt_detectors, settings.batch_size
    )
    result = execute(shards, workers)
    provenance = (
        cutoff_provenance(machine_class, settings)
        if cutoff == cutoff_for(machine_class, settings)
        else "override"
    )
    report = census_from(result, machine_class, blank_mode, cutoff, provenance, nonhalt_detectors)
    logger.info(str(report))
    return report


def busy_beaver(
    machine_class: MachineClass,
    cutoff_schedule: Sequence[int] = DEFAULT_SCHEDULE,
    workers: int = 1,
    settings: Settings | None = None,
    budget: int | None = None,
) -> BusyBeaverRecord:
    """
    Establish Σ(n,2) and S(n,2) by censuses at escalating cutoffs (blank 0).

    The schedule stops once the halting count and both maxima agree across two
    consecutive cutoffs. The record is exact when, at that point, every
    non-halter was proven non-halting or the cutoff reached the configured
    S(n,2); otherwise it is a lower bound.

    Raises:
        ValidationError: If the schedule is empty or not strictly ascending.
    """
    schedule = list(cutoff_schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:], strict=False)):
        msg = f"cutoff schedule must be non-empty and strictly ascending, got {schedule}"
        raise ValidationError(msg)
    settings = settings or load_settings()
    known = settings.bb_steps.get(machine_class.n)

    visited: list[int] = []
    previous: CensusReport | None = None
    report: CensusReport | None = None
    for cutoff in schedule:
        report = run_census(
            machine_class, cutoff, ALL_DETECTORS, BlankMode.ZERO, workers, settings, budget
        )
        visited.append(cutoff)
        if previous is not None and (
            previous.halting,
            previous.max_steps_observed,
            previous.max_ones_observed,
        ) == (report.halting, report.max_steps_observed, report.max_ones_observed):
            break
        previous = report
    else:
        logger.warning(f"{machine_class}: censuses did not stabilise within {schedule}")
        previous = None

    stable = previous is not None
    covered = known is not None and report.cutoff_used >= known
    exact = stable and (report.unresolved == 0 or covered)
    record = BusyBeaverRecord(
        n=machine_class.n,
        sigma=report.max_ones_observed,
        s_max=report.max_steps_observed,
        status=BeaverStatus.EXACT if exact else BeaverStatus.LOWER_BOUND,
        cutoffs_visited=tuple(visited),
        halting=report.halting,
    )
    logger.info(
        f"Busy Beaver {machine_class}: Sigma={record.sigma}, S={record.s_max} "
        f"({record.status.value})"
    )
    return record


def verify_detectors(
    machine_class: MachineClass,
    cutoff: int,
    sample_size: int,
    seed: int,
    blank: int = 0,
    factor: int = 10,
) -> list[tuple[int, ...]]:
    """
    Spot-check detector soundness on a seeded sample.

    Every sampled machine the detectors classify as non-halting is re-simulated
    to ``factor * cutoff`` steps.

    Returns:
        Digit tuples of machines that were classified non-halting but halted
        (an empty list when the detectors are sound on the sample).
    """
    digits = random_digits(machine_class.n, sample_size, np.random.default_rng(seed))
    batch = run_batch(digits, machine_class.n, cutoff, blank, ALL_DETECTORS)
    failures = []
    for row in np.flatnonzero(batch.status == RunStatus.NON_HALTING):
        table = table_from_digits(digits[row], machine_class.n)
        if isinstance(simulate(table, factor * cutoff, blank), Halted):
            failures.append(tuple(int(d) for d in digits[row]))
    if failures:
        logger.warning(
            f"{len(failures)} detector-classified machines halted within {factor}x cutoff"
        )
    return failures
