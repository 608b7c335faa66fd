"""Injective baseline code giving compression upper bounds on complexity.

Codeword layout (all fields self-delimiting)::

    mode tag (2 bits) | Elias-gamma(len(s)) | payload

Modes:
    ``00`` literal      payload = s
    ``01`` run-length   payload = first bit, then Elias-gamma of each run length
    ``10`` periodic     payload = Elias-gamma(p), then the first p bits, where p is
                        the smallest period of s and 2 <= p <= len(s) // 2

The encoder keeps the shortest applicable codeword, preferring literal, then
run-length, then periodic on ties. Because every codeword carries a length
header, no string is shorter than itself once encoded.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from itertools import groupby

from algoprob.errors import CodewordError, ValidationError

logger = logging.getLogger(__name__)

# Pluggable complexity estimators (e.g. an external compressor); none ship.
ESTIMATORS: dict[str, Callable[[str], int]] = {}


class CodecMode(Enum):
    """Codeword modes and their 2-bit tags."""

    LITERAL = "00"
    RUN_LENGTH = "01"
    PERIODIC = "10"


@dataclass(frozen=True)
class Codeword:
    """A decoded view of one codeword."""

    mode: CodecMode
    length: int
    payload: str

    @property
    def header(self) -> str:
        """Return tag plus Elias-gamma length."""
        return self.mode.value + gamma_encode(self.length)

    @property
    def bits(self) -> str:
        """Return the full codeword bit string."""
        return self.header + self.payload

    def __len__(self) -> int:
        """Return the code length in bits."""
        return len(self.bits)

    def to_hex(self) -> str:
        """Return the codeword as hex, zero-padded on the right to whole nibbles."""
        bits = self.bits
        bits += "0" * (-len(bits) % 4)
        return "".join(f"{int(bits[i : i + 4], 2):x}" for i in range(0, len(bits), 4))


def _check_bits(s: str) -> None:
    if not s or set(s) - {"0", "1"}:
        msg = f"Expected a non-empty bit string, got {s!r}"
        raise ValidationError(msg)


def gamma_encode(n: int) -> str:
    """Elias-gamma code of a positive integer."""
    if n <= 0:
        msg = f"Elias gamma needs a positive integer, got {n}"
        raise ValidationError(msg)
    binary = bin(n)[2:]
    return "0" * (len(binary) - 1) + binary


def gamma_decode(bits: str, index: int) -> tuple[int, int]:
    """
    Decode one Elias-gamma integer starting at ``index``.

    Returns:
        ``(value, next_index)``.

    Raises:
        CodewordError: If the stream ends inside the code.
    """
    zeros = 0
    while index + zeros < len(bits) and bits[index + zeros] == "0":
        zeros += 1
    end = index + 2 * zeros + 1
    if end > len(bits):
        msg = f"Truncated Elias-gamma code at bit {index}"
        raise CodewordError(msg)
    return int(bits[index + zeros : end], 2), end


def smallest_period(s: str) -> int:
    """Return the smallest p such that s[i] == s[i + p] for all valid i."""
    failure = [0] * len(s)
    k = 0
    for i in range(1, len(s)):
        while k and s[i] != s[k]:
            k = failure[k - 1]
        if s[i] == s[k]:
            k += 1
        failure[i] = k
    return len(s) - failure[-1]


def _candidates(s: str) -> list[Codeword]:
    runs = [len(list(group)) for _, group in groupby(s)]
    candidates = [
        Codeword(CodecMode.LITERAL, len(s), s),
        Codeword(CodecMode.RUN_LENGTH, len(s), s[0] + "".join(gamma_encode(r) for r in runs)),
    ]
    period = smallest_period(s)
    if 2 <= period <= len(s) // 2:
        candidates.append(Codeword(CodecMode.PERIODIC, len(s), gamma_encode(period) + s[:period]))
    return candidates


def encode(s: str) -> Codeword:
    """
    Encode ``s`` with the shortest applicable mode (ties go to the earlier mode).

    Raises:
        ValidationError: If ``s`` is not a non-empty bit string.
    """
    _check_bits(s)
    return min(_candidates(s), key=len)


def _decode_payload(mode: CodecMode, length: int, bits: str, index: int) -> tuple[str, int]:
    if mode is CodecMode.LITERAL:
        end = index + length
        if end > len(bits):
            msg = f"Literal payload truncated: need {length} bits"
            raise CodewordError(msg)
        return bits[index:end], end
    if mode is CodecMode.RUN_LENGTH:
        if index >= len(bits):
            msg = "Run-length payload truncated before the first bit"
            raise CodewordError(msg)
        bit, index = bits[index], index + 1
        out: list[str] = []
        produced = 0
        while produced < length:
            run, index = gamma_decode(bits, index)
            if produced + run > length:
                msg = f"Run of {run} overflows the declared length {length}"
                raise CodewordError(msg)
            out.append(bit * run)
            produced += run
            bit = "1" if bit == "0" else "0"
        return "".join(out), index
    period, index = gamma_decode(bits, index)
    end = index + period
    if end > len(bits) or not 2 <= period <= length // 2:
        msg = f"Invalid periodic payload (period {period}, length {length})"
        raise CodewordError(msg)
    pattern = bits[index:end]
    return (pattern * (length // period + 1))[:length], end


def parse_bits(bits: str, strict: bool = True) -> tuple[Codeword, str]:
    """
    Parse one codeword from the front of ``bits``.

    Args:
        bits: Bit string holding a codeword.
        strict: Reject trailing bits; when False, up to 3 trailing zero bits
            (nibble padding) are accepted.

    Returns:
        The codeword and the string it decodes to.

    Raises:
        CodewordError: If the bits are truncated, malformed or have leftovers.
    """
    if len(bits) < 3:
        msg = "Codeword truncated: shorter than the smallest header"
        raise CodewordError(msg)
    try:
        mode = CodecMode(bits[:2])
    except ValueError as e:
        msg = f"Unknown mode tag {bits[:2]!r}"
        raise CodewordError(msg) from e
    length, index = gamma_decode(bits, 2)
    decoded, index = _decode_payload(mode, length, bits, index)
    rest = bits[index:]
    if rest and (strict or len(rest) > 3 or set(rest) != {"0"}):
        msg = f"{len(rest)} unexpected trailing bits after the codeword"
        raise CodewordError(msg)
    payload = bits[len(mode.value) + len(gamma_encode(length)) : index]
    return Codeword(mode, length, payload), decoded


def decode(codeword: Codeword) -> str:
    """
    Return the string ``codeword`` encodes; exact inverse of :func:`encode`.

    Raises:
        CodewordError: If the codeword is malformed or truncated.
    """
    return parse_bits(codeword.bits)[1]


def from_hex(text: str) -> tuple[Codeword, str]:
    """
    Parse a hex codeword as printed by :meth:`Codeword.to_hex`.

    Raises:
        CodewordError: If the text is not hex or does not hold a codeword.
    """
    try:
        bits = "".join(f"{int(c, 16):04b}" for c in text.strip())
    except ValueError as e:
        msg = f"Not a hex string: {text!r}"
        raise CodewordError(msg) from e
    return parse_bits(bits, strict=False)


def code_length(s: str) -> int:
    """Return the length in bits of ``encode(s)``."""
    return len(encode(s))


def k_upper_bound(s: str, estimator: str | None = None) -> int:
    """
    Return a compression upper bound on the complexity of ``s`` (in bits).

    The bound holds up to the fixed size of the decoder.

    Args:
        s: Non-empty bit string.
        estimator: Name of a registered estimator; default is the baseline code.

    Raises:
        ValidationError: On an unknown estimator or a bad string.
    """
    if estimator is None:
        return code_length(s)
    if estimator not in ESTIMATORS:
        msg = f"Unknown estimator {estimator!r}; registered: {sorted(ESTIMATORS)}"
        raise ValidationError(msg)
    _check_bits(s)
    return ESTIMATORS[estimator](s)


def register_estimator(name: str, estimator: Callable[[str], int]) -> None:
    """Register an external complexity estimator under ``name``."""
    logger.debug(f"Registering estimator {name}")
    ESTIMATORS[name] = estimator
