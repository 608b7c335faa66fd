"""n-state 2-symbol Turing machines: indexing, simulation and mirroring.

A machine in the class (n,2) has one transition per (state, read bit) pair,
2n entries in all. Each entry is one of 4n+2 actions:

- digits ``0 .. 4n-1``: ``Step(write, move, next_state)`` in lexicographic
  (write, move, next_state) order, with LEFT before RIGHT;
- digit ``4n``: ``HaltWrite(0)``; digit ``4n+1``: ``HaltWrite(1)``.

Entry (s, b) is digit ``2(s-1)+b`` of the machine index in base ``4n+2``
(least significant digit first), so indices are a bijection onto
``range((4n+2)**(2n))``.

A halting action writes at the head and stops without moving. Every applied
transition, the halting one included, counts as a step.
"""

import logging
import re
from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum

import numpy as np

from algoprob.errors import ValidationError

logger = logging.getLogger(__name__)

SYMBOLS = 2


class Move(Enum):
    """Head movement of a non-halting transition."""

    LEFT = -1
    RIGHT = 1

    @property
    def flipped(self) -> "Move":
        """Return the opposite direction."""
        return Move.RIGHT if self is Move.LEFT else Move.LEFT

    @property
    def letter(self) -> str:
        """Return ``L`` or ``R``."""
        return self.name[0]


class BlankMode(Enum):
    """Which blank tapes a machine is started on."""

    ZERO = "zero"
    ONE = "one"
    BOTH = "both"

    @property
    def blanks(self) -> tuple[int, ...]:
        """Return the blank symbols this mode runs on."""
        if self is BlankMode.ZERO:
            return (0,)
        if self is BlankMode.ONE:
            return (1,)
        return (0, 1)


@dataclass(frozen=True)
class MachineClass:
    """The class (n,2) of all n-state 2-symbol machines (halting state excluded)."""

    n: int

    def __post_init__(self) -> None:
        """Reject empty classes."""
        if not isinstance(self.n, int) or self.n < 1:
            msg = f"A machine class needs at least one state, got n={self.n!r}"
            raise ValidationError(msg)

    @property
    def symbols(self) -> int:
        """Return the number of tape symbols (always 2)."""
        return SYMBOLS

    @property
    def radix(self) -> int:
        """Return the number of actions per table entry, 4n+2."""
        return 4 * self.n + 2

    @property
    def entries(self) -> int:
        """Return the number of table entries, 2n."""
        return 2 * self.n

    @property
    def rulespace_size(self) -> int:
        """Return (4n+2)^(2n)."""
        return self.radix**self.entries

    def __str__(self) -> str:
        """Return the usual ``(n,2)`` notation."""
        return f"({self.n},2)"


@dataclass(frozen=True)
class Step:
    """Write a bit, move the head, switch state."""

    write: int
    move: Move
    next_state: int


@dataclass(frozen=True)
class HaltWrite:
    """Write a bit at the head and halt without moving."""

    write: int


Action = Step | HaltWrite


def action_for_digit(digit: int, n: int) -> Action:
    """
    Map a base-(4n+2) digit to its action.

    Args:
        digit: Digit in ``range(4n+2)``.
        n: Number of states.

    Returns:
        The action the digit denotes.
    """
    if digit >= 4 * n:
        return HaltWrite(digit - 4 * n)
    write, rest = divmod(digit, 2 * n)
    move_bit, next_state = divmod(rest, n)
    return Step(write, Move.RIGHT if move_bit else Move.LEFT, next_state + 1)


def digit_for_action(action: Action, n: int) -> int:
    """
    Inverse of :func:`action_for_digit`.

    Raises:
        ValidationError: If the action does not belong to an (n,2) table.
    """
    if isinstance(action, HaltWrite):
        if action.write not in (0, 1):
            msg = f"HaltWrite must write 0 or 1, got {action.write!r}"
            raise ValidationError(msg)
        return 4 * n + action.write
    if isinstance(action, Step):
        if action.write not in (0, 1) or not isinstance(action.move, Move):
            msg = f"Malformed step {action!r}"
            raise ValidationError(msg)
        if not 1 <= action.next_state <= n:
            msg = f"Step targets state {action.next_state}, class has states 1..{n}"
            raise ValidationError(msg)
        move_bit = 1 if action.move is Move.RIGHT else 0
        return action.write * 2 * n + move_bit * n + (action.next_state - 1)
    msg = f"Not an action: {action!r}"
    raise ValidationError(msg)


@dataclass(frozen=True)
class TransitionTable:
    """Full transition function of an (n,2) machine.

    ``actions[2*(s-1)+b]`` is the action for state ``s`` reading ``b``.
    """

    machine_class: MachineClass
    actions: tuple[Action, ...]

    def __post_init__(self) -> None:
        """Check the entry count."""
        if len(self.actions) != self.machine_class.entries:
            msg = (
                f"A {self.machine_class} table has {self.machine_class.entries} entries, "
                f"got {len(self.actions)}"
            )
            raise ValidationError(msg)

    def entry(self, state: int, bit: int) -> Action:
        """Return the action for ``state`` (1-based) reading ``bit``."""
        return self.actions[2 * (state - 1) + bit]

    @property
    def entries(self) -> dict[tuple[int, int], Action]:
        """Return the table as a ``(state, bit) -> action`` mapping."""
        return {
            (state, bit): self.entry(state, bit)
            for state in range(1, self.machine_class.n + 1)
            for bit in (0, 1)
        }

    @property
    def digits(self) -> tuple[int, ...]:
        """Return the entry digits, least significant first."""
        return tuple(digit_for_action(a, self.machine_class.n) for a in self.actions)

    @property
    def machine_index(self) -> int:
        """Return this table's index in the rulespace."""
        return encode_machine(self)


class Tape:
    """Two-way unbounded tape addressed by signed offsets.

    Only written cells are stored; anything else reads as ``blank``.
    """

    def __init__(self, blank: int = 0) -> None:
        """Initialise an empty tape with the head at offset 0."""
        self.blank = blank
        self.cells: dict[int, int] = {}
        self.head = 0
        self.min_visited = 0
        self.max_visited = 0

    def read(self) -> int:
        """Return the bit under the head."""
        return self.cells.get(self.head, self.blank)

    def write(self, bit: int) -> None:
        """Write ``bit`` under the head."""
        self.cells[self.head] = bit

    def move(self, direction: Move) -> None:
        """Move the head one cell and extend the visited extent."""
        self.head += direction.value
        if self.head < self.min_visited:
            self.min_visited = self.head
        elif self.head > self.max_visited:
            self.max_visited = self.head

    def segment(self) -> str:
        """Return the visited segment (min..max visited offsets) as a bit string."""
        return "".join(
            str(self.cells.get(i, self.blank))
            for i in range(self.min_visited, self.max_visited + 1)
        )


@dataclass(frozen=True)
class Halted:
    """The machine halted within the cap."""

    steps: int
    ones: int
    output: str


@dataclass(frozen=True)
class CutoffExceeded:
    """The machine was still running after ``cap`` steps."""

    cap: int


RunOutcome = Halted | CutoffExceeded


def _check_index(index: int, machine_class: MachineClass) -> None:
    size = machine_class.rulespace_size
    if not isinstance(index, int) or not 0 <= index < size:
        msg = f"Machine index {index!r} out of range for {machine_class}: rulespace size is {size}"
        raise ValidationError(msg)


def decode_machine(index: int, machine_class: MachineClass) -> TransitionTable:
    """
    Decode a rulespace index into its transition table.

    Args:
        index: Index in ``range(machine_class.rulespace_size)``.
        machine_class: The (n,2) class.

    Returns:
        The transition table.

    Raises:
        ValidationError: If ``index`` is out of range.
    """
    _check_index(index, machine_class)
    n, radix = machine_class.n, machine_class.radix
    actions = []
    for _ in range(machine_class.entries):
        index, digit = divmod(index, radix)
        actions.append(action_for_digit(digit, n))
    return TransitionTable(machine_class, tuple(actions))


def encode_machine(table: TransitionTable) -> int:
    """
    Return the rulespace index of ``table``; inverse of :func:`decode_machine`.

    Raises:
        ValidationError: If an entry is not a valid action for the table's class.
    """
    n, radix = table.machine_class.n, table.machine_class.radix
    index = 0
    for action in reversed(table.actions):
        index = index * radix + digit_for_action(action, n)
    return index


def table_from_digits(
    digits: "list[int] | tuple[int, ...] | np.ndarray", n: int
) -> TransitionTable:
    """Build a table from its entry digits (least significant first)."""
    return TransitionTable(MachineClass(n), tuple(action_for_digit(int(d), n) for d in digits))


def random_table(machine_class: MachineClass, rng: np.random.Generator) -> TransitionTable:
    """Draw a table uniformly from the rulespace."""
    digits = rng.integers(0, machine_class.radix, size=machine_class.entries)
    return table_from_digits(digits, machine_class.n)


def simulate(table: TransitionTable, step_cap: int, blank: int = 0) -> RunOutcome:
    """
    Run ``table`` from state 1 on a blank tape.

    Args:
        table: The machine.
        step_cap: Maximum number of transitions to apply.
        blank: The symbol every unvisited cell holds.

    Returns:
        ``Halted`` with the visited segment as output, or ``CutoffExceeded``.

    Raises:
        ValidationError: If ``step_cap`` < 1 or ``blank`` is not a bit.
    """
    if step_cap < 1:
        msg = f"step_cap must be >= 1, got {step_cap}"
        raise ValidationError(msg)
    if blank not in (0, 1):
        msg = f"blank must be 0 or 1, got {blank!r}"
        raise ValidationError(msg)

    tape = Tape(blank)
    state = 1
    for step in range(1, step_cap + 1):
        action = table.entry(state, tape.read())
        tape.write(action.write)
        if isinstance(action, HaltWrite):
            output = tape.segment()
            return Halted(steps=step, ones=output.count("1"), output=output)
        tape.move(action.move)
        state = action.next_state
    return CutoffExceeded(cap=step_cap)


def mirror(table: TransitionTable) -> TransitionTable:
    """Return ``table`` with every step's direction flipped (an involution)."""
    return TransitionTable(
        table.machine_class,
        tuple(
            Step(a.write, a.move.flipped, a.next_state) if isinstance(a, Step) else a
            for a in table.actions
        ),
    )


def iter_tables(machine_class: MachineClass) -> Iterator[TransitionTable]:
    """Yield every table of the class in index order."""
    for index in range(machine_class.rulespace_size):
        yield decode_machine(index, machine_class)


def format_table(table: TransitionTable) -> str:
    """
    Render a table in the ``state,read -> write,move,next|HALT`` dump format.

    Example line: ``1,0 -> 1,R,2`` or ``2,1 -> 1,HALT``.
    """
    lines = []
    for (state, bit), action in table.entries.items():
        if isinstance(action, HaltWrite):
            rhs = f"{action.write},HALT"
        else:
            rhs = f"{action.write},{action.move.letter},{action.next_state}"
        lines.append(f"{state},{bit} -> {rhs}")
    return "\n".join(lines)


_LINE = re.compile(r"^\s*(\d+)\s*,\s*([01])\s*->\s*([01])\s*,\s*(?:(HALT)|([LR])\s*,\s*(\d+))\s*$")


def parse_table(text: str, n: int) -> TransitionTable:
    """
    Parse the output of :func:`format_table`.

    Raises:
        ValidationError: On a malformed line, a missing or repeated entry, or an
            out-of-range state.
    """
    machine_class = MachineClass(n)
    found: dict[tuple[int, int], Action] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        match = _LINE.match(line)
        if match is None:
            msg = f"Line {lineno}: cannot parse {line!r}"
            raise ValidationError(msg)
        state, bit, write = int(match[1]), int(match[2]), int(match[3])
        if not 1 <= state <= n or (state, bit) in found:
            msg = f"Line {lineno}: invalid or repeated entry ({state},{bit})"
            raise ValidationError(msg)
        if match[4]:
            found[(state, bit)] = HaltWrite(write)
        else:
            move = Move.RIGHT if match[5] == "R" else Move.LEFT
            found[(state, bit)] = Step(write, move, int(match[6]))

    missing = [key for key in machine_class_keys(machine_class) if key not in found]
    if missing:
        msg = f"Table is missing entries {missing}"
        raise ValidationError(msg)
    actions = tuple(found[k] for k in machine_class_keys(machine_class))
    table = TransitionTable(machine_class, actions)
    encode_machine(table)
    return table


def machine_class_keys(machine_class: MachineClass) -> list[tuple[int, int]]:
    """Return the (state, bit) keys in entry order."""
    return [(s, b) for s in range(1, machine_class.n + 1) for b in (0, 1)]


def escape_states(table: TransitionTable, blank: int) -> dict[Move, frozenset[int]]:
    """
    Return, per direction, the states from which the machine provably runs off
    into fresh blank tape forever.

    A machine at the edge of its visited extent reads ``blank``. If following
    ``(state, blank)`` transitions keeps moving in the same direction and revisits
    a state before halting or turning, it never halts.
    """
    result: dict[Move, frozenset[int]] = {}
    n = table.machine_class.n
    for direction in Move:
        escaping = set()
        for start in range(1, n + 1):
            seen = set()
            state = start
            while state not in seen:
                seen.add(state)
                action = table.entry(state, blank)
                if isinstance(action, HaltWrite) or action.move is not direction:
                    break
                state = action.next_state
            else:
                escaping.add(start)
        result[direction] = frozenset(escaping)
    return result
