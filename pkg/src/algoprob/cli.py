"""Command-line interface for algoprob."""

import datetime as dt
import functools
import json
import logging
import sys
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, TypeVar

import click

from algoprob import codec, distribution
from algoprob.batch import ALL_DETECTORS, NonHaltDetector
from algoprob.config import Settings, load_settings
from algoprob.ctm import (
    Exhaustive,
    Sampled,
    compute_d_with_census,
    ctm_complexity,
    halting_fraction,
    rank_distribution,
)
from algoprob.distribution import FrequencyDistribution, merge_all, uniform_distribution
from algoprob.eca import (
    Boundary,
    EcaConfig,
    InitMode,
    Slicing,
    central_column,
    eca_tuple_distribution,
    evolve,
    rule30_frequency,
    to_pbm,
)
from algoprob.errors import AlgoprobError, ValidationError
from algoprob.halting import CensusReport, busy_beaver, cutoff_for, run_census
from algoprob.machine import BlankMode, MachineClass, decode_machine, format_table, simulate
from algoprob.manifest import build_manifest, write_manifest
from algoprob.market import (
    CsvSchema,
    PriceSeries,
    encode_directions,
    extract_tuples,
    ingest_csv,
    restrict_dates,
    walk,
    walk_to_csv,
)
from algoprob.stats import (
    AlignmentPolicy,
    CompareRow,
    compare_distributions,
    compare_markets,
    format_table_text,
    to_compare_csv,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(levelname)s: %(message)s",
    handlers=[logging.StreamHandler(sys.stderr)],
)

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

# Global options that never change an output file.
UNRECORDED_PARAMS = {"workers", "verbose"}


@dataclass(frozen=True)
class RunContext:
    """Global options shared by every subcommand."""

    workers: int
    seed: int
    cutoff: int | None
    budget: int | None
    out_format: str
    settings: Settings


def handle_errors(func: F) -> F:
    """Turn library errors into messages and exit codes."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except AlgoprobError as e:
            click.echo(f"Error: {e}", err=True)
            logger.debug("Command failed", exc_info=True)
            sys.exit(e.exit_code)
        except KeyboardInterrupt:
            click.echo("\n\nCancelled by user.", err=True)
            sys.exit(130)
        except Exception as e:
            click.echo(f"\nError: {e}", err=True)
            logger.exception("Command failed with exception")
            sys.exit(1)

    return wrapper  # type: ignore[return-value]


def parse_range(text: str) -> list[int]:
    """
    Parse ``a..b`` (inclusive) or a single integer.

    Raises:
        ValidationError: On malformed or empty ranges.
    """
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError as e:
        msg = f"Expected a range like 5..10, got {text!r}"
        raise ValidationError(msg) from e
    if lo > hi:
        msg = f"Empty range {text!r}"
        raise ValidationError(msg)
    return list(range(lo, hi + 1))


def parse_rules(text: str) -> list[int]:
    """Parse ``all``, a range ``a..b`` or a comma list of ECA rule numbers."""
    if text == "all":
        return list(range(256))
    rules: list[int] = []
    for part in text.split(","):
        rules.extend(parse_range(part.strip()))
    return rules


def _jsonable(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dt.date | dt.datetime):
        return value.isoformat()
    if isinstance(value, tuple | list):
        return [_jsonable(v) for v in value]
    return value


def _recorded_params(ctx: click.Context) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for level in reversed(list(_lineage(ctx))):
        params.update(
            {k: _jsonable(v) for k, v in level.params.items() if k not in UNRECORDED_PARAMS}
        )
    return params


def _lineage(ctx: click.Context) -> list[click.Context]:
    chain = []
    current: click.Context | None = ctx
    while current is not None:
        chain.append(current)
        current = current.parent
    return chain


def _command_name(ctx: click.Context) -> str:
    names = [level.info_name or "" for level in reversed(_lineage(ctx)[:-1])]
    return " ".join(["algoprob", *names])


def emit(ctx: click.Context, text: str, out: Path | None, cutoff: int | None = None) -> None:
    """Print ``text``, or write it to ``out`` together with its run manifest."""
    if out is None:
        click.echo(text, nl=False)
        return
    out.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {out}")
    run: RunContext = ctx.obj
    manifest = build_manifest(
        _command_name(ctx),
        _recorded_params(ctx),
        run.settings.snapshot(),
        [out],
        seed=run.seed,
        cutoff=cutoff,
    )
    write_manifest(manifest, out)


def _record_text(record: Mapping[str, Any], out_format: str) -> str:
    if out_format == "json":
        return json.dumps(record, indent=2, sort_keys=True) + "\n"
    lines = ["field,value"]
    for key, value in record.items():
        shown = ";".join(map(str, value)) if isinstance(value, list) else value
        lines.append(f"{key},{shown}")
    return "\n".join(lines) + "\n"


def _distribution_text(dist: FrequencyDistribution, out_format: str) -> str:
    return distribution.to_json(dist) if out_format == "json" else distribution.to_csv(dist)


def _compare_text(table: Mapping[str, Sequence[CompareRow]], out_format: str, text: bool) -> str:
    if text:
        return format_table_text(table)
    if out_format == "json":
        document = {label: [row.to_dict() for row in rows] for label, rows in table.items()}
        return json.dumps(document, indent=2, sort_keys=True) + "\n"
    return to_compare_csv(table)


out_option = click.option(
    "-o",
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the result to this file (plus a .manifest.json) instead of stdout",
)


@click.group(name="algoprob")
@click.version_option(package_name="algoprob")
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose logging")
@click.option("--workers", type=click.IntRange(min=1), default=1, help="Worker processes")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for every random draw")
@click.option("--cutoff", type=click.IntRange(min=1), default=None, help="Override the step cutoff")
@click.option(
    "--budget",
    type=click.IntRange(min=1),
    default=None,
    help="Allow exhaustive enumeration of rulespaces up to this many machines",
)
@click.option(
    "--out-format",
    type=click.Choice(["csv", "json"], case_sensitive=False),
    default="csv",
    help="Format of distribution and report output",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Alternative cutoffs/defaults TOML file",
)
@click.pass_context
@handle_errors
def main(
    ctx: click.Context,
    verbose: bool,
    workers: int,
    seed: int,
    cutoff: int | None,
    budget: int | None,
    out_format: str,
    config_path: Path | None,
) -> None:
    """Estimate algorithmic probability and complexity of short binary strings."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
        logger.debug("Verbose logging enabled")
    ctx.obj = RunContext(
        workers=workers,
        seed=seed,
        cutoff=cutoff,
        budget=budget,
        out_format=out_format.lower(),
        settings=load_settings(config_path),
    )


# --- ctm ---------------------------------------------------------------------


@main.group()
def ctm() -> None:
    """Output distributions D(n) and coding-theorem complexity."""


blank_option = click.option(
    "--blank",
    type=click.Choice([m.value for m in BlankMode], case_sensitive=False),
    default=BlankMode.BOTH.value,
    show_default=True,
    help="Blank tape(s) machines start on",
)


def _compute(
    run: RunContext, n: int, mode: str = "exhaustive", size: int = 0, blank: str = "both"
) -> tuple[FrequencyDistribution, CensusReport]:
    enumeration = Sampled(size, run.seed) if mode == "sampled" else Exhaustive()
    return compute_d_with_census(
        MachineClass(n),
        enumeration,
        cutoff=run.cutoff,
        blank_mode=BlankMode(blank),
        workers=run.workers,
        settings=run.settings,
        budget=run.budget,
    )


def _load_or_compute(
    run: RunContext, dist_path: Path | None, n: int | None
) -> FrequencyDistribution:
    if dist_path is not None:
        return distribution.load(dist_path)
    if n is None:
        msg = "Give either --dist FILE or -n N"
        raise ValidationError(msg)
    return _compute(run, n)[0]


@ctm.command("dist")
@click.option("-n", "--states", "n", type=click.IntRange(min=1), required=True, help="States n")
@click.option(
    "--mode",
    type=click.Choice(["exhaustive", "sampled"], case_sensitive=False),
    default="exhaustive",
    show_default=True,
)
@click.option("--size", type=click.IntRange(min=1), default=100_000, help="Sample size")
@blank_option
@out_option
@click.pass_context
@handle_errors
def ctm_dist(
    ctx: click.Context, n: int, mode: str, size: int, blank: str, out: Path | None
) -> None:
    """Compute D(n) and write it as CSV or JSON."""
    run: RunContext = ctx.obj
    dist, report = _compute(run, n, mode.lower(), size, blank.lower())
    click.echo(str(report), err=True)
    share = halting_fraction(report)
    click.echo(
        f"Halting fraction: {share.fraction} of machines ({float(share.fraction):.4f}), "
        f"{share.run_fraction} of runs",
        err=True,
    )
    emit(ctx, _distribution_text(dist, run.out_format), out, cutoff=report.cutoff_used)


dist_option = click.option(
    "--dist",
    "dist_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Distribution file (.csv or .json)",
)
states_option = click.option(
    "-n", "--states", "n", type=click.IntRange(min=1), default=None, help="Compute D(n) instead"
)


@ctm.command("k")
@click.argument("string")
@dist_option
@states_option
@click.pass_context
@handle_errors
def ctm_k(ctx: click.Context, string: str, dist_path: Path | None, n: int | None) -> None:
    """Print the coding-theorem complexity of STRING."""
    dist = _load_or_compute(ctx.obj, dist_path, n)
    estimate = ctm_complexity(string, dist)
    click.echo(f"{estimate.string},{estimate.probability},{estimate.k_ctm:.6f}")


@ctm.command("table")
@dist_option
@states_option
@out_option
@click.pass_context
@handle_errors
def ctm_table_cmd(
    ctx: click.Context, dist_path: Path | None, n: int | None, out: Path | None
) -> None:
    """Rank a distribution and list every string's complexity."""
    run: RunContext = ctx.obj
    dist = _load_or_compute(run, dist_path, n)
    ranked = rank_distribution(dist)
    if run.out_format == "json":
        rows = [
            {
                "rank": entry.rank,
                "string": entry.string,
                "probability": float(entry.probability),
                "k_ctm": ctm_complexity(entry.string, dist).k_ctm,
            }
            for entry in ranked
        ]
        text = json.dumps(rows, indent=2) + "\n"
    else:
        lines = ["rank,string,probability,k_ctm"]
        lines.extend(
            f"{e.rank:g},{e.string},{float(e.probability):.12f},"
            f"{ctm_complexity(e.string, dist).k_ctm:.6f}"
            for e in ranked
        )
        text = "\n".join(lines) + "\n"
    emit(ctx, text, out)


def _eca_template(settings: Settings, seed: int) -> EcaConfig:
    defaults = settings.eca
    try:
        return EcaConfig(
            rule=0,
            width=defaults.width,
            steps=defaults.steps,
            boundary=Boundary(defaults.boundary),
            init=InitMode(defaults.init),
            seed=seed,
            density=defaults.density,
        )
    except ValueError as e:
        if isinstance(e, ValidationError):
            raise
        msg = f"Invalid ECA defaults in {settings.source}: {e}"
        raise ValidationError(msg) from e


def _eca_reference(run: RunContext, ks: Sequence[int]) -> FrequencyDistribution:
    template = _eca_template(run.settings, run.seed)
    return merge_all(eca_tuple_distribution(run.settings.eca.rules, k, template) for k in ks)


@ctm.command("crosscheck")
@click.option("-n", "--states", "n", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--k", "k_text", default="3..5", show_default=True, help="Tuple lengths a..b")
@blank_option
@out_option
@click.pass_context
@handle_errors
def ctm_crosscheck(ctx: click.Context, n: int, k_text: str, blank: str, out: Path | None) -> None:
    """Rank-correlate D(n) with the reference ECA tuple distribution."""
    run: RunContext = ctx.obj
    ks = parse_range(k_text)
    dist, report = _compute(run, n, blank=blank.lower())
    rows = compare_distributions(dist, _eca_reference(run, ks), ks)
    text = _compare_text({f"D({n}) v. ECA": rows}, run.out_format, False)
    emit(ctx, text, out, report.cutoff_used)


# --- bb ----------------------------------------------------------------------


@main.group()
def bb() -> None:
    """Halting censuses and Busy Beaver values."""


def _parse_detectors(text: str) -> frozenset[NonHaltDetector]:
    if text == "none":
        return frozenset()
    try:
        return frozenset(NonHaltDetector(part.strip()) for part in text.split(","))
    except ValueError as e:
        choices = ", ".join(d.value for d in NonHaltDetector)
        msg = f"Unknown detector in {text!r}; choose from {choices} or 'none'"
        raise ValidationError(msg) from e


@bb.command("census")
@click.option("-n", "--states", "n", type=click.IntRange(min=1), required=True, help="States n")
@click.option(
    "--blank",
    type=click.Choice([m.value for m in BlankMode], case_sensitive=False),
    default=BlankMode.BOTH.value,
    show_default=True,
    help="Blank tape(s) machines start on",
)
@click.option(
    "--detectors",
    default=",".join(sorted(d.value for d in ALL_DETECTORS)),
    show_default=True,
    help="Comma-separated non-halting detectors, or 'none'",
)
@out_option
@click.pass_context
@handle_errors
def bb_census(ctx: click.Context, n: int, blank: str, detectors: str, out: Path | None) -> None:
    """Classify every (n,2) machine at the cutoff."""
    run: RunContext = ctx.obj
    machine_class = MachineClass(n)
    cutoff = run.cutoff or cutoff_for(machine_class, run.settings)
    report = run_census(
        machine_class,
        cutoff,
        _parse_detectors(detectors),
        BlankMode(blank.lower()),
        run.workers,
        run.settings,
        run.budget,
    )
    emit(ctx, _record_text(report.to_dict(), run.out_format), out, cutoff)


@bb.command("beaver")
@click.option("-n", "--states", "n", type=click.IntRange(min=1), required=True, help="States n")
@click.option(
    "--schedule",
    default=None,
    help="Comma-separated ascending cutoffs (default: powers of two up to 2048)",
)
@out_option
@click.pass_context
@handle_errors
def bb_beaver(ctx: click.Context, n: int, schedule: str | None, out: Path | None) -> None:
    """Establish Sigma(n,2) and S(n,2) by escalating censuses."""
    run: RunContext = ctx.obj
    kwargs: dict[str, Any] = {}
    if schedule is not None:
        try:
            kwargs["cutoff_schedule"] = [int(part) for part in schedule.split(",")]
        except ValueError as e:
            msg = f"Schedule must be comma-separated integers, got {schedule!r}"
            raise ValidationError(msg) from e
    record = busy_beaver(
        MachineClass(n), workers=run.workers, settings=run.settings, budget=run.budget, **kwargs
    )
    emit(ctx, _record_text(record.to_dict(), run.out_format), out)


@bb.command("show")
@click.option("-n", "--states", "n", type=click.IntRange(min=1), required=True, help="States n")
@click.argument("index", type=click.IntRange(min=0))
@click.option("--blank", type=click.IntRange(0, 1), default=0, show_default=True)
@click.pass_context
@handle_errors
def bb_show(ctx: click.Context, n: int, index: int, blank: int) -> None:
    """Print machine INDEX's transition table and run it."""
    run: RunContext = ctx.obj
    machine_class = MachineClass(n)
    table = decode_machine(index, machine_class)
    cutoff = run.cutoff or cutoff_for(machine_class, run.settings)
    click.echo(format_table(table))
    click.echo(f"# {simulate(table, cutoff, blank)}")


# --- eca ---------------------------------------------------------------------


@main.group()
def eca() -> None:
    """Elementary cellular automata."""


@eca.command("dist")
@click.option("--rules", "rules_text", default=None, help="'all', a..b or comma list")
@click.option("--k", type=click.IntRange(1, 16), required=True, help="Tuple length")
@click.option("--width", type=click.IntRange(min=3), default=None)
@click.option("--steps", type=click.IntRange(min=1), default=None)
@click.option("--init", type=click.Choice([m.value for m in InitMode]), default=None)
@click.option("--boundary", type=click.Choice([b.value for b in Boundary]), default=None)
@click.option("--slicing", type=click.Choice([s.value for s in Slicing]), default="rows")
@click.option("--complements", is_flag=True, help="Also evolve complement rules")
@out_option
@click.pass_context
@handle_errors
def eca_dist(
    ctx: click.Context,
    rules_text: str | None,
    k: int,
    width: int | None,
    steps: int | None,
    init: str | None,
    boundary: str | None,
    slicing: str,
    complements: bool,
    out: Path | None,
) -> None:
    """Aggregate k-tuple counts over ECA evolutions."""
    run: RunContext = ctx.obj
    template = _eca_template(run.settings, run.seed)
    overrides: dict[str, Any] = {}
    if width is not None:
        overrides["width"] = width
    if steps is not None:
        overrides["steps"] = steps
    if init is not None:
        overrides["init"] = InitMode(init)
    if boundary is not None:
        overrides["boundary"] = Boundary(boundary)
    template = replace(template, **overrides)
    rules = parse_rules(rules_text) if rules_text is not None else run.settings.eca.rules
    dist = eca_tuple_distribution(rules, k, template, Slicing(slicing), complements)
    emit(ctx, _distribution_text(dist, run.out_format), out)


@eca.command("column")
@click.option("--rule", type=click.IntRange(0, 255), default=30, show_default=True)
@click.option("--steps", type=click.IntRange(min=1), required=True)
@out_option
@click.pass_context
@handle_errors
def eca_column(ctx: click.Context, rule: int, steps: int, out: Path | None) -> None:
    """Print the central column of a single-1 evolution."""
    bits = central_column(rule, steps)
    click.echo(f"Fraction of 1s: {rule30_frequency(bits):.6f}", err=True)
    emit(ctx, bits + "\n", out)


@eca.command("pbm")
@click.option("--rule", type=click.IntRange(0, 255), required=True)
@click.option("--width", type=click.IntRange(min=3), default=None)
@click.option("--steps", type=click.IntRange(min=1), default=None)
@out_option
@click.pass_context
@handle_errors
def eca_pbm(
    ctx: click.Context, rule: int, width: int | None, steps: int | None, out: Path | None
) -> None:
    """Render an evolution as a plain PBM image."""
    run: RunContext = ctx.obj
    template = _eca_template(run.settings, run.seed)
    config = EcaConfig(
        rule=rule,
        width=width or template.width,
        steps=steps or template.steps,
        boundary=template.boundary,
        init=template.init,
        seed=template.seed,
        density=template.density,
    )
    emit(ctx, to_pbm(evolve(config)), out)


# --- market ------------------------------------------------------------------


@main.group()
def market() -> None:
    """Binarised closing-price series."""


def market_options(func: F) -> F:
    """Attach the CSV schema and date-window options."""
    options = [
        click.option("--date-col", default="Date", show_default=True),
        click.option("--close-col", default="Close", show_default=True),
        click.option("--date-format", default="%Y-%m-%d", show_default=True),
        click.option("--start", type=click.DateTime(["%Y-%m-%d"]), default=None),
        click.option("--end", type=click.DateTime(["%Y-%m-%d"]), default=None),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _read_series(
    path: Path,
    date_col: str,
    close_col: str,
    date_format: str,
    start: dt.datetime | None,
    end: dt.datetime | None,
) -> PriceSeries:
    series = ingest_csv(path, CsvSchema(date_col, close_col, date_format))
    if start is not None or end is not None:
        series = restrict_dates(
            series, start.date() if start else None, end.date() if end else None
        )
    return series


csv_argument = click.argument(
    "csv_path", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)


@market.command("encode")
@csv_argument
@market_options
@out_option
@click.pass_context
@handle_errors
def market_encode(ctx: click.Context, csv_path: Path, out: Path | None, **schema: Any) -> None:
    """Print the rise/fall bit string of a price CSV."""
    seq = encode_directions(_read_series(csv_path, **schema))
    emit(ctx, seq.bits + "\n", out)


@market.command("tuples")
@csv_argument
@click.option("--k", type=click.IntRange(1, 16), required=True, help="Tuple length")
@market_options
@out_option
@click.pass_context
@handle_errors
def market_tuples(
    ctx: click.Context, csv_path: Path, k: int, out: Path | None, **schema: Any
) -> None:
    """Count the overlapping k-tuples of a price series."""
    seq = encode_directions(_read_series(csv_path, **schema))
    emit(ctx, _distribution_text(extract_tuples(seq, k), ctx.obj.out_format), out)


@market.command("walk")
@csv_argument
@market_options
@out_option
@click.pass_context
@handle_errors
def market_walk(ctx: click.Context, csv_path: Path, out: Path | None, **schema: Any) -> None:
    """Emit the +1/-1 walk of a price series as index,value CSV."""
    seq = encode_directions(_read_series(csv_path, **schema))
    emit(ctx, walk_to_csv(walk(seq)), out)


@market.command("compare")
@click.argument(
    "csv_paths",
    nargs=-1,
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option(
    "--ref",
    type=click.Choice(["eca", "uniform", "ctm"], case_sensitive=False),
    default="eca",
    show_default=True,
    help="Reference distribution",
)
@click.option(
    "--ref-file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Use a distribution file as the reference instead",
)
@click.option(
    "--ref-n", type=click.IntRange(min=1), default=3, show_default=True, help="n for --ref ctm"
)
@click.option("--k", "k_text", default=None, help="Tuple lengths a..b (default from config)")
@click.option(
    "--policy",
    type=click.Choice([p.value for p in AlignmentPolicy], case_sensitive=False),
    default=None,
    help="Alignment policy (default from config)",
)
@click.option("--text", "as_text", is_flag=True, help="Print the rho|n table instead")
@market_options
@out_option
@click.pass_context
@handle_errors
def market_compare(
    ctx: click.Context,
    csv_paths: tuple[Path, ...],
    ref: str,
    ref_file: Path | None,
    ref_n: int,
    k_text: str | None,
    policy: str | None,
    as_text: bool,
    out: Path | None,
    **schema: Any,
) -> None:
    """Spearman-correlate market k-tuple frequencies with a reference."""
    run: RunContext = ctx.obj
    ks = parse_range(k_text) if k_text else list(range(run.settings.k_min, run.settings.k_max + 1))
    try:
        alignment = AlignmentPolicy((policy or run.settings.policy).lower())
    except ValueError as e:
        msg = f"Unknown alignment policy {policy or run.settings.policy!r}"
        raise ValidationError(msg) from e

    cutoff = None
    if ref_file is not None:
        reference = distribution.load(ref_file)
    elif ref == "uniform":
        reference = merge_all(uniform_distribution(k) for k in ks)
    elif ref == "ctm":
        reference, report = _compute(run, ref_n)
        cutoff = report.cutoff_used
    else:
        reference = _eca_reference(run, ks)

    markets = {}
    for path in csv_paths:
        series = _read_series(path, **schema)
        markets[series.label] = encode_directions(series)
    table = compare_markets(markets, reference, ks, alignment)
    emit(ctx, _compare_text(table, run.out_format, as_text), out, cutoff)


# --- codec -------------------------------------------------------------------


@main.group("codec")
def codec_group() -> None:
    """Baseline compression code and complexity upper bounds."""


@codec_group.command("encode")
@click.argument("string")
@handle_errors
def codec_encode(string: str) -> None:
    """Print the codeword of STRING as hex."""
    word = codec.encode(string)
    click.echo(f"Mode {word.mode.name.lower()}, {len(word)} bits", err=True)
    click.echo(word.to_hex())


@codec_group.command("decode")
@click.argument("hex_text")
@handle_errors
def codec_decode(hex_text: str) -> None:
    """Print the string a hex codeword encodes."""
    _, decoded = codec.from_hex(hex_text)
    click.echo(decoded)


@codec_group.command("bound")
@click.argument("string")
@handle_errors
def codec_bound(string: str) -> None:
    """Print a compression upper bound (bits) on the complexity of STRING."""
    click.echo(codec.k_upper_bound(string))


if __name__ == "__main__":
    main()
