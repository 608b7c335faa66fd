"""Sharded enumeration of machine classes over a process pool.

Shards are fixed by the class, the cutoff and the configured batch size, never
by the worker count, and shard results merge with a commutative, associative
sum. Any number of workers therefore yields identical totals.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import reduce
from multiprocessing import Pool

import numpy as np

from algoprob.batch import (
    NonHaltDetector,
    RunStatus,
    chunk_size,
    digits_for_range,
    random_digits,
    run_batch,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Shard:
    """A slice of work: an index range, or a seeded uniform sample."""

    n: int
    cap: int
    blanks: tuple[int, ...]
    detectors: frozenset[NonHaltDetector]
    start: int = 0
    stop: int = 0
    sample_size: int = 0
    seed: np.random.SeedSequence | None = None

    @property
    def machines(self) -> int:
        """Return how many machines the shard covers."""
        return self.sample_size if self.seed is not None else self.stop - self.start

    def digits(self) -> np.ndarray:
        """Materialise the shard's digit matrix."""
        if self.seed is not None:
            return random_digits(self.n, self.sample_size, np.random.default_rng(self.seed))
        return digits_for_range(self.n, self.start, self.stop)


@dataclass(frozen=True)
class ShardResult:
    """Aggregated outcome of one or more shards."""

    machines: int = 0
    runs: int = 0
    halting: int = 0
    non_halting_proven: int = 0
    unresolved: int = 0
    max_steps: int = 0
    max_ones: int = 0
    outputs: Counter[str] = field(default_factory=Counter)

    def merge(self, other: "ShardResult") -> "ShardResult":
        """Combine two results; commutative and associative."""
        return ShardResult(
            machines=self.machines + other.machines,
            runs=self.runs + other.runs,
            halting=self.halting + other.halting,
            non_halting_proven=self.non_halting_proven + other.non_halting_proven,
            unresolved=self.unresolved + other.unresolved,
            max_steps=max(self.max_steps, other.max_steps),
            max_ones=max(self.max_ones, other.max_ones),
            outputs=self.outputs + other.outputs,
        )


def run_shard(shard: Shard) -> ShardResult:
    """Simulate every machine of ``shard`` on each of its blanks."""
    digits = shard.digits()
    result = ShardResult(machines=len(digits))
    for blank in shard.blanks:
        batch = run_batch(digits, shard.n, shard.cap, blank, shard.detectors)
        result = result.merge(
            ShardResult(
                runs=len(batch),
                halting=batch.count(RunStatus.HALTED),
                non_halting_proven=batch.count(RunStatus.NON_HALTING),
                unresolved=batch.count(RunStatus.UNRESOLVED),
                max_steps=batch.max_steps,
                max_ones=batch.max_ones,
                outputs=batch.output_counts(),
            )
        )
    return result


def plan_exhaustive(
    n: int,
    cap: int,
    blanks: tuple[int, ...],
    detectors: frozenset[NonHaltDetector],
    batch_size: int,
    start: int = 0,
    stop: int | None = None,
) -> list[Shard]:
    """Split the index range ``start .. stop`` (default: whole rulespace) into shards."""
    stop = (4 * n + 2) ** (2 * n) if stop is None else stop
    size = chunk_size(cap, batch_size)
    return [
        Shard(n, cap, blanks, detectors, start=lo, stop=min(lo + size, stop))
        for lo in range(start, stop, size)
    ]


def plan_sampled(
    n: int,
    cap: int,
    blanks: tuple[int, ...],
    detectors: frozenset[NonHaltDetector],
    batch_size: int,
    sample_size: int,
    seed: int,
) -> list[Shard]:
    """Split a uniform sample into shards, each with its own spawned seed."""
    size = chunk_size(cap, batch_size)
    counts = [min(size, sample_size - lo) for lo in range(0, sample_size, size)]
    seeds = np.random.SeedSequence(seed).spawn(len(counts))
    return [
        Shard(n, cap, blanks, detectors, sample_size=count, seed=child)
        for count, child in zip(counts, seeds, strict=True)
    ]


def _map(shards: list[Shard], workers: int) -> Iterator[ShardResult]:
    if workers <= 1 or len(shards) <= 1:
        yield from map(run_shard, shards)
        return
    with Pool(processes=min(workers, len(shards))) as pool:
        yield from pool.imap(run_shard, shards)


def execute(shards: Iterable[Shard], workers: int = 1) -> ShardResult:
    """
    Run ``shards`` on ``workers`` processes and merge their results.

    Args:
        shards: Work to do.
        workers: Process count; 1 runs in the calling process.

    Returns:
        The merged result.
    """
    shards = list(shards)
    logger.debug(f"Running {len(shards)} shards on {max(1, workers)} worker(s)")
    return reduce(ShardResult.merge, _map(shards, workers), ShardResult())
