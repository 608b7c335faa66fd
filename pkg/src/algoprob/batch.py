"""Vectorised simulation of many (n,2) machines at once.

Each machine is one row of a digit matrix laid out exactly like
:func:`algoprob.machine.decode_machine` lays out an index: column ``2(s-1)+b``
holds the action digit for state ``s`` reading ``b``. The tape of every
machine is a fixed-width row of ``2*cap+1`` cells centred on the start cell,
which is wide enough for ``cap`` moves in either direction.

Resolved machines (halted or proven non-halting) are dropped from the working
arrays as soon as they resolve, so the cost of a batch is dominated by the
machines that stay undecided.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from algoprob.errors import ValidationError

logger = logging.getLogger(__name__)

# Upper bound on tape cells held in memory per batch (one byte each).
MAX_CELLS = 1 << 25
INT64_MAX = np.iinfo(np.int64).max


class RunStatus(IntEnum):
    """Classification of one run."""

    HALTED = 0
    NON_HALTING = 1
    UNRESOLVED = 2


class NonHaltDetector(Enum):
    """Sound non-halting detectors applied while a batch runs."""

    BLANK_ESCAPE = "blank-escape"
    CYCLE = "cycle"


ALL_DETECTORS = frozenset(NonHaltDetector)


@dataclass(frozen=True)
class BatchResult:
    """Per-machine results of :func:`run_batch`.

    ``output_codes[i]`` indexes ``outputs`` for halted machines and is -1 otherwise.
    ``steps[i]`` is the halting step, or the step at which non-halting was proven.
    """

    status: np.ndarray
    steps: np.ndarray
    ones: np.ndarray
    output_codes: np.ndarray
    outputs: tuple[str, ...]

    def __len__(self) -> int:
        """Return the number of machines in the batch."""
        return len(self.status)

    def output(self, i: int) -> str | None:
        """Return the output of machine ``i`` or None if it did not halt."""
        code = int(self.output_codes[i])
        return None if code < 0 else self.outputs[code]

    def output_counts(self) -> Counter[str]:
        """Return how many halted machines produced each output."""
        halted = self.output_codes[self.output_codes >= 0]
        tally = np.bincount(halted, minlength=len(self.outputs))
        return Counter({self.outputs[c]: int(tally[c]) for c in np.flatnonzero(tally)})

    def count(self, status: RunStatus) -> int:
        """Return how many machines ended with ``status``."""
        return int(np.count_nonzero(self.status == status))

    @property
    def max_steps(self) -> int:
        """Return the longest halting run, 0 if nothing halted."""
        halted = self.status == RunStatus.HALTED
        return int(self.steps[halted].max()) if halted.any() else 0

    @property
    def max_ones(self) -> int:
        """Return the most 1s left by a halting run, 0 if nothing halted."""
        halted = self.status == RunStatus.HALTED
        return int(self.ones[halted].max()) if halted.any() else 0


def _action_arrays(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return write/move/next/halt lookup arrays indexed by action digit."""
    digit = np.arange(4 * n + 2)
    halt = digit >= 4 * n
    write = np.where(halt, digit - 4 * n, digit // (2 * n)).astype(np.int8)
    move = np.where(halt, 0, np.where((digit // n) % 2 == 1, 1, -1)).astype(np.int64)
    next_state = np.where(halt, 0, digit % n).astype(np.int64)
    return write, move, next_state, halt


def escape_table(digits: np.ndarray, n: int, blank: int) -> np.ndarray:
    """
    Return a ``(machines, 2, n)`` mask of blank-escape states.

    ``mask[i, 0, q]`` (left) / ``mask[i, 1, q]`` (right) is set when machine ``i``
    entering fresh blank tape in 0-based state ``q`` while moving that way keeps
    moving that way forever. After ``n`` consecutive same-direction moves on
    blanks some state has repeated, so ``n`` iterations decide it.
    """
    _, move, next_state, halt = _action_arrays(n)
    on_blank = digits[:, blank::2]
    moves, nexts, halts = move[on_blank], next_state[on_blank], halt[on_blank]
    rows = np.arange(len(digits))[:, None]
    mask = np.zeros((len(digits), 2, n), dtype=bool)
    for side, direction in enumerate((-1, 1)):
        current = np.broadcast_to(np.arange(n), (len(digits), n)).copy()
        escaping = np.ones((len(digits), n), dtype=bool)
        for _ in range(n):
            escaping &= ~halts[rows, current] & (moves[rows, current] == direction)
            current = nexts[rows, current]
        mask[:, side, :] = escaping
    return mask


def digits_for_range(n: int, start: int, stop: int) -> np.ndarray:
    """
    Return the digit matrix of machine indices ``start .. stop-1``.

    Indices or place values past the int64 range are decoded with Python integers.
    """
    radix = 4 * n + 2
    if max(stop - 1, radix ** (2 * n - 1)) <= INT64_MAX:
        index = np.arange(start, stop, dtype=np.int64)
        powers = radix ** np.arange(2 * n, dtype=np.int64)
    else:
        index = np.array(range(start, stop), dtype=object)
        powers = np.array([radix**i for i in range(2 * n)], dtype=object)
    return ((index[:, None] // powers[None, :]) % radix).astype(np.int64)


def random_digits(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` machines uniformly (each entry digit independently uniform)."""
    return rng.integers(0, 4 * n + 2, size=(size, 2 * n), dtype=np.int64)


def chunk_size(cap: int, requested: int) -> int:
    """Return a batch size that keeps the tape matrix under ``MAX_CELLS`` cells."""
    return max(1, min(requested, MAX_CELLS // (2 * cap + 1)))


def _segments_to_strings(segments: np.ndarray) -> tuple[list[str], np.ndarray]:
    """Collapse padded segment rows (pad value 2) to distinct strings + inverse."""
    unique, inverse = np.unique(segments, axis=0, return_inverse=True)
    strings = [
        (row[row < 2] + ord("0")).astype(np.uint8).tobytes().decode("ascii") for row in unique
    ]
    return strings, inverse.reshape(-1)


def run_batch(  # noqa: PLR0915
    digits: np.ndarray,
    n: int,
    cap: int,
    blank: int = 0,
    detectors: frozenset[NonHaltDetector] = ALL_DETECTORS,
) -> BatchResult:
    """
    Simulate every machine in ``digits`` from a blank tape.

    Args:
        digits: ``(machines, 2n)`` action digits.
        n: Number of states.
        cap: Maximum number of transitions per machine.
        blank: Symbol of unvisited cells.
        detectors: Non-halting detectors to apply to running machines.

    Returns:
        Per-machine status, steps, ones and outputs.

    Raises:
        ValidationError: On a bad cap, blank or digit matrix shape.
    """
    if cap < 1:
        msg = f"cap must be >= 1, got {cap}"
        raise ValidationError(msg)
    if blank not in (0, 1):
        msg = f"blank must be 0 or 1, got {blank!r}"
        raise ValidationError(msg)
    digits = np.asarray(digits, dtype=np.int64)
    if digits.ndim != 2 or digits.shape[1] != 2 * n:
        msg = f"digit matrix must have shape (machines, {2 * n}), got {digits.shape}"
        raise ValidationError(msg)

    total = len(digits)
    width = 2 * cap + 1
    write_of, move_of, next_of, halt_of = _action_arrays(n)

    status = np.full(total, RunStatus.UNRESOLVED, dtype=np.int8)
    steps = np.zeros(total, dtype=np.int64)
    ones = np.zeros(total, dtype=np.int64)
    codes = np.full(total, -1, dtype=np.int64)
    outputs: list[str] = []
    code_of: dict[str, int] = {}

    alive = np.arange(total)
    table = digits
    tape = np.full((total, width), blank, dtype=np.int8)
    state = np.zeros(total, dtype=np.int64)
    head = np.full(total, cap, dtype=np.int64)
    lo = head.copy()
    hi = head.copy()
    escape = escape_table(digits, n, blank) if NonHaltDetector.BLANK_ESCAPE in detectors else None
    use_cycle = NonHaltDetector.CYCLE in detectors
    snapshot: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    for step in range(1, cap + 1):
        if len(alive) == 0:
            break
        rows = np.arange(len(alive))
        digit = table[rows, 2 * state + tape[rows, head]]
        tape[rows, head] = write_of[digit]
        halting = halt_of[digit]

        if halting.any():
            h = np.flatnonzero(halting)
            length = hi[h] - lo[h] + 1
            span = np.arange(int(length.max()))
            cols = np.minimum(lo[h][:, None] + span[None, :], width - 1)
            segments = tape[h[:, None], cols]
            segments[span[None, :] >= length[:, None]] = 2
            strings, inverse = _segments_to_strings(segments)
            for s in strings:
                if s not in code_of:
                    code_of[s] = len(outputs)
                    outputs.append(s)
            local = np.array([code_of[s] for s in strings], dtype=np.int64)
            codes[alive[h]] = local[inverse]
            ones[alive[h]] = np.count_nonzero(segments == 1, axis=1)
            status[alive[h]] = RunStatus.HALTED
            steps[alive[h]] = step

        head = head + move_of[digit]
        state = next_of[digit]
        grew_left = head < lo
        grew_right = head > hi
        lo = np.minimum(lo, head)
        hi = np.maximum(hi, head)

        proven = np.zeros(len(alive), dtype=bool)
        if escape is not None:
            proven |= grew_left & escape[rows, 0, state]
            proven |= grew_right & escape[rows, 1, state]
        if snapshot is not None:
            snap_state, snap_head, snap_tape = snapshot
            same = np.flatnonzero((state == snap_state) & (head == snap_head) & ~halting & ~proven)
            if len(same):
                proven[same[np.all(tape[same] == snap_tape[same], axis=1)]] = True
        proven &= ~halting
        if proven.any():
            status[alive[proven]] = RunStatus.NON_HALTING
            steps[alive[proven]] = step

        keep = ~(halting | proven)
        if not keep.all():
            alive, table, tape = alive[keep], table[keep], tape[keep]
            state, head, lo, hi = state[keep], head[keep], lo[keep], hi[keep]
            if escape is not None:
                escape = escape[keep]
            if snapshot is not None:
                snapshot = tuple(part[keep] for part in snapshot)
        if use_cycle and step & (step - 1) == 0:
            snapshot = (state.copy(), head.copy(), tape.copy())

    logger.debug(
        f"Batch of {total} ({n},2) machines, blank {blank}, cap {cap}: "
        f"{int(np.count_nonzero(status == RunStatus.HALTED))} halted, {len(alive)} unresolved"
    )
    return BatchResult(status, steps, ones, codes, tuple(outputs))
