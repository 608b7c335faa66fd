"""Exception hierarchy shared by every algoprob module.

Each exception class carries the process exit code the CLI uses for it.
"""


class AlgoprobError(Exception):
    """Base class for all errors raised by algoprob."""

    exit_code: int = 1


class ValidationError(AlgoprobError, ValueError):
    """Invalid argument, machine index, table or configuration value."""

    exit_code = 2


class BudgetExceededError(AlgoprobError):
    """Exhaustive enumeration refused because the rulespace is too large."""

    exit_code = 3

    def __init__(self, message: str, rulespace_size: int, required_mode: str = "sampled") -> None:
        """
        Initialise the error.

        Args:
            message: Human-readable explanation.
            rulespace_size: Number of machines that would have been enumerated.
            required_mode: The mode the caller should switch to.
        """
        super().__init__(message)
        self.rulespace_size = rulespace_size
        self.required_mode = required_mode


class DataError(AlgoprobError, ValueError):
    """Input data is unusable (bad CSV, too short, nothing to align...)."""

    exit_code = 4


class CsvParseError(DataError):
    """A CSV cell could not be parsed."""

    def __init__(self, message: str, row: int) -> None:
        """Initialise with the 1-based data row that failed."""
        super().__init__(message)
        self.row = row


class DateOrderError(DataError):
    """Dates are not strictly increasing."""

    def __init__(self, message: str, row: int) -> None:
        """Initialise with the first offending 1-based data row."""
        super().__init__(message)
        self.row = row


class DuplicateDateError(DateOrderError):
    """The same date appears twice."""


class InsufficientDataError(DataError):
    """Not enough points, bits or pairs for the requested operation."""


class AlignmentError(DataError):
    """Two distributions share nothing to compare at the requested length."""


class CodewordError(DataError):
    """A baseline codeword is truncated or otherwise malformed."""


class NotInSupportError(DataError, LookupError):
    """A string was never produced by the distribution's source."""

    def __init__(self, message: str, string: str, min_probability: float) -> None:
        """
        Initialise the error.

        Args:
            message: Human-readable explanation.
            string: The missing string.
            min_probability: Smallest probability in the distribution, usable as an
                upper-bound proxy for the missing string's complexity.
        """
        super().__init__(message)
        self.string = string
        self.min_probability = min_probability

    def __str__(self) -> str:
        """Return the message (LookupError would otherwise repr it)."""
        return str(self.args[0])
