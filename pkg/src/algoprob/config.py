"""Loading of the versioned cutoff/defaults file."""

import logging
import sys
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from algoprob.errors import ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = "cutoffs.toml"


@dataclass(frozen=True)
class EcaDefaults:
    """Default parameters of the reference ECA tuple distribution."""

    rules: tuple[int, ...] = tuple(range(256))
    width: int = 63
    steps: int = 63
    init: str = "single"
    boundary: str = "cyclic"
    density: float = 0.5


@dataclass(frozen=True)
class Settings:
    """Validated contents of a cutoffs file."""

    version: int
    bb_steps: dict[int, int]
    bb_provenance: dict[int, str]
    educated_guess: int = 500
    exhaustive_budget: int = 10_000_000
    min_sample_size: int = 10_000
    batch_size: int = 200_000
    eca: EcaDefaults = field(default_factory=EcaDefaults)
    k_min: int = 5
    k_max: int = 10
    policy: str = "intersection"
    source: str = DEFAULT_CONFIG

    def snapshot(self) -> dict[str, Any]:
        """Return a JSON-ready copy for run manifests."""
        data = asdict(self)
        data["bb_steps"] = {str(k): v for k, v in sorted(self.bb_steps.items())}
        data["bb_provenance"] = {str(k): v for k, v in sorted(self.bb_provenance.items())}
        data["eca"]["rules"] = _rules_label(self.eca.rules)
        return data


def _rules_label(rules: tuple[int, ...]) -> str | list[int]:
    return "all" if rules == tuple(range(256)) else list(rules)


def _parse_rules(value: Any) -> tuple[int, ...]:
    if value == "all":
        return tuple(range(256))
    if isinstance(value, list) and all(isinstance(r, int) and 0 <= r <= 255 for r in value):
        return tuple(value)
    msg = f"eca.rules must be 'all' or a list of integers 0..255, got {value!r}"
    raise ValidationError(msg)


def _int_keys(table: dict[str, Any], name: str) -> dict[int, Any]:
    try:
        return {int(k): v for k, v in table.items()}
    except ValueError as e:
        msg = f"{name} keys must be state counts: {e}"
        raise ValidationError(msg) from e


def parse_settings(raw: dict[str, Any], source: str = DEFAULT_CONFIG) -> Settings:
    """
    Validate a decoded TOML document.

    Args:
        raw: The decoded document.
        source: Where it came from, recorded in manifests.

    Returns:
        The validated settings.

    Raises:
        ValidationError: If a required key is missing or a value is out of range.
    """
    try:
        bb = raw["busy_beaver"]
        enumeration = raw.get("enumeration", {})
        eca = raw.get("eca", {})
        compare = raw.get("compare", {})
        steps = _int_keys(bb["steps"], "busy_beaver.steps")
        provenance = _int_keys(bb.get("provenance", {}), "busy_beaver.provenance")
        settings = Settings(
            version=int(raw["version"]),
            bb_steps=steps,
            bb_provenance={n: provenance.get(n, "published") for n in steps},
            educated_guess=int(bb.get("educated_guess", 500)),
            exhaustive_budget=int(enumeration.get("exhaustive_budget", 10_000_000)),
            min_sample_size=int(enumeration.get("min_sample_size", 10_000)),
            batch_size=int(enumeration.get("batch_size", 200_000)),
            eca=EcaDefaults(
                rules=_parse_rules(eca.get("rules", "all")),
                width=int(eca.get("width", 63)),
                steps=int(eca.get("steps", 63)),
                init=str(eca.get("init", "single")),
                boundary=str(eca.get("boundary", "cyclic")),
                density=float(eca.get("density", 0.5)),
            ),
            k_min=int(compare.get("k_min", 5)),
            k_max=int(compare.get("k_max", 10)),
            policy=str(compare.get("policy", "intersection")),
            source=source,
        )
    except KeyError as e:
        msg = f"Config {source} is missing required key {e}"
        raise ValidationError(msg) from e
    except (TypeError, ValueError) as e:
        if isinstance(e, ValidationError):
            raise
        msg = f"Config {source} has an invalid value: {e}"
        raise ValidationError(msg) from e

    if any(v < 1 for v in settings.bb_steps.values()) or settings.educated_guess < 1:
        msg = f"Config {source}: cutoffs must be >= 1"
        raise ValidationError(msg)
    if settings.batch_size < 1 or settings.exhaustive_budget < 1:
        msg = f"Config {source}: batch_size and exhaustive_budget must be >= 1"
        raise ValidationError(msg)
    return settings


def load_settings(path: Path | None = None) -> Settings:
    """
    Load settings from ``path`` or from the packaged default file.

    Args:
        path: Optional alternative cutoffs file.

    Returns:
        The validated settings.

    Raises:
        ValidationError: If the file cannot be read or is invalid.
    """
    if path is None:
        text = resources.files("algoprob").joinpath(DEFAULT_CONFIG).read_text(encoding="utf-8")
        source = DEFAULT_CONFIG
    else:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            msg = f"Cannot read config {path}: {e}"
            raise ValidationError(msg) from e
        source = str(path)

    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        msg = f"Config {source} is not valid TOML: {e}"
        raise ValidationError(msg) from e

    settings = parse_settings(raw, source)
    logger.debug(f"Loaded config {source} (version {settings.version})")
    return settings
