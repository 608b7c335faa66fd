"""The empirical universal distribution D(n) and coding-theorem complexity.

D(n) counts the outputs of halting (n,2) machines started on a blank tape.
Probabilities are normalised by the number of halting runs by default; the
all-runs normalisation is kept in the distribution's ``runs`` field.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from scipy.stats import rankdata

from algoprob.batch import ALL_DETECTORS, NonHaltDetector
from algoprob.config import Settings, load_settings
from algoprob.distribution import FrequencyDistribution, Normalization
from algoprob.errors import NotInSupportError, ValidationError
from algoprob.halting import (
    CensusReport,
    census_from,
    check_budget,
    cutoff_for,
    cutoff_provenance,
)
from algoprob.machine import BlankMode, MachineClass
from algoprob.parallel import execute, plan_exhaustive, plan_sampled

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Exhaustive:
    """Enumerate the whole rulespace."""

    name = "exhaustive"


@dataclass(frozen=True)
class Sampled:
    """Draw ``size`` machines uniformly with a seeded generator."""

    size: int
    seed: int
    name = "sampled"


EnumerationMode = Exhaustive | Sampled


@dataclass(frozen=True)
class ComplexityEstimate:
    """Coding-theorem estimate of one string's complexity."""

    string: str
    k_ctm: float
    probability: Fraction


@dataclass(frozen=True)
class HaltingFraction:
    """
    Halting share of a finite class.

    ``fraction`` is halting runs over machines, so it reaches 2 when every machine
    halts on both blanks; ``run_fraction`` is halting runs over all runs.
    """

    machine_class: MachineClass
    fraction: Fraction
    run_fraction: Fraction


@dataclass(frozen=True)
class RankedString:
    """One entry of a ranked distribution; tied strings share an average rank."""

    string: str
    probability: Fraction
    rank: float


def _neg_log2(p: Fraction) -> float:
    return math.log2(p.denominator) - math.log2(p.numerator)


def compute_d_with_census(
    machine_class: MachineClass,
    mode: EnumerationMode,
    cutoff: int | None = None,
    blank_mode: BlankMode = BlankMode.BOTH,
    detectors: frozenset[NonHaltDetector] = ALL_DETECTORS,
    workers: int = 1,
    settings: Settings | None = None,
    budget: int | None = None,
) -> tuple[FrequencyDistribution, CensusReport]:
    """
    Compute D(n) together with the census of the runs behind it.

    Args:
        machine_class: The (n,2) class.
        mode: Exhaustive enumeration or a seeded uniform sample.
        cutoff: Step cap; defaults to :func:`cutoff_for`.
        blank_mode: Blank tape(s); ``BOTH`` pools runs on 0- and 1-filled tapes.
        detectors: Non-halting detectors (they never change the counts).
        workers: Worker processes; never changes the result.
        settings: Loaded config (default: packaged file).
        budget: Exhaustive budget override.

    Returns:
        The distribution and its census report.

    Raises:
        BudgetExceededError: Exhaustive mode over budget.
        ValidationError: Sample too small, or bad cutoff.
    """
    settings = settings or load_settings()
    cutoff = cutoff if cutoff is not None else cutoff_for(machine_class, settings)
    if cutoff < 1:
        msg = f"cutoff must be >= 1, got {cutoff}"
        raise ValidationError(msg)
    provenance = (
        cutoff_provenance(machine_class, settings)
        if cutoff == cutoff_for(machine_class, settings)
        else "override"
    )

    n = machine_class.n
    if isinstance(mode, Sampled):
        if mode.size < settings.min_sample_size:
            msg = (
                f"Sampled mode needs at least {settings.min_sample_size} machines, "
                f"got {mode.size}"
            )
            raise ValidationError(msg)
        shards = plan_sampled(
            n, cutoff, blank_mode.blanks, detectors, settings.batch_size, mode.size, mode.seed
        )
    else:
        check_budget(machine_class, budget or settings.exhaustive_budget)
        shards = plan_exhaustive(n, cutoff, blank_mode.blanks, detectors, settings.batch_size)

    logger.info(f"Computing D({n}) in {mode.name} mode at cutoff {cutoff} ({provenance})")
    result = execute(shards, workers)
    report = census_from(result, machine_class, blank_mode, cutoff, provenance, detectors)

    source = {
        "kind": "turing-machines",
        "n": n,
        "mode": mode.name,
        "cutoff": cutoff,
        "cutoff_provenance": provenance,
        "blank_mode": blank_mode.value,
        "machines": result.machines,
        "runs": result.runs,
        "halting": result.halting,
        "unresolved": result.unresolved,
    }
    if isinstance(mode, Sampled):
        source.update(
            sample_size=mode.size, seed=mode.seed, generator="numpy.PCG64/SeedSequence.spawn"
        )
    distribution = FrequencyDistribution(dict(result.outputs), source, runs=result.runs)
    logger.info(
        f"D({n}): {len(distribution)} strings from {result.halting} halting runs of {result.runs}"
    )
    return distribution, report


def compute_D(  # noqa: N802
    machine_class: MachineClass,
    mode: EnumerationMode | None = None,
    cutoff: int | None = None,
    **kwargs: Any,
) -> FrequencyDistribution:
    """Compute D(n), exhaustively unless a mode is given; see :func:`compute_d_with_census`."""
    distribution, _ = compute_d_with_census(machine_class, mode or Exhaustive(), cutoff, **kwargs)
    return distribution


def ctm_complexity(
    s: str,
    distribution: FrequencyDistribution,
    normalization: Normalization = Normalization.HALTING,
) -> ComplexityEstimate:
    """
    Estimate the complexity of ``s`` as ``-log2 D(s)`` (no additive constant).

    Raises:
        NotInSupportError: If ``s`` was never produced; carries the distribution's
            minimum probability.
    """
    if s not in distribution:
        msg = (
            f"{s!r} is not in the support ({len(distribution)} strings); "
            f"minimum probability is {distribution.min_probability:.6g}"
        )
        raise NotInSupportError(msg, s, distribution.min_probability)
    probability = distribution.probability(s, normalization)
    return ComplexityEstimate(s, _neg_log2(probability), probability)


def halting_fraction(report: CensusReport) -> HaltingFraction:
    """Return the census's halting count over its machines and over its runs."""
    return HaltingFraction(
        report.machine_class,
        Fraction(report.halting, report.total_machines),
        Fraction(report.halting, report.runs),
    )


def rank_distribution(distribution: FrequencyDistribution) -> list[RankedString]:
    """
    Rank the support by descending probability.

    Order ties by shorter string first, then lexicographically; tied
    probabilities share their average 1-based rank.

    Raises:
        ValidationError: If the distribution is empty.
    """
    if not distribution.counts:
        msg = "Cannot rank an empty distribution"
        raise ValidationError(msg)
    items = distribution.ranked_items()
    ranks = rankdata([-count for _, count in items], method="average")
    total = distribution.total
    return [
        RankedString(string, Fraction(count, total), float(rank))
        for (string, count), rank in zip(items, ranks, strict=True)
    ]


def ctm_table(distribution: FrequencyDistribution) -> list[ComplexityEstimate]:
    """Return the complexity estimate of every support string, in rank order."""
    return [ctm_complexity(entry.string, distribution) for entry in rank_distribution(distribution)]
