"""Command-line front door: flag parsing, CSV emission, run summaries.

Exit codes: 0 success/converged, 1 not converged (or an incomplete
comparison/sweep), 2 usage error, 3 output write failure. Floating-point
fields are printed as fixed 17-significant-digit scientific notation so
emitted files are diffable across machines and round-trip exactly.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from . import experiment
from .errors import IoError, UsageError
from .kinematics import ComparisonRow, IndexingConvention, SimulationConfig

CSV_HEADER = "n,u_r,u_c,energy_interaction,energy_str,alpha,gamma,degenerate"
SWEEP_CSV_HEADER = "epsilon,max_abs_deviation,mean_abs_deviation,sample_count,failed"
CONFIG_ENV_VAR = "PHOTON_KICK_CONFIG"

DEFAULT_TOLERANCE = 1e-6
DEFAULT_MAX_STEPS = 10_000_000
DEFAULT_STRIDE = 1000

_CONVENTIONS = {convention.value: convention for convention in IndexingConvention}
_CONFIG_KEYS = ("epsilon", "tolerance", "max-steps", "stride", "targets", "convention", "out")


@dataclass(frozen=True)
class CliInvocation:
    """A fully validated invocation; no computation has happened yet."""

    subcommand: str
    epsilons: tuple[float, ...]
    tolerance: float
    max_steps: int
    stride: int
    targets: tuple[float, ...] | None
    convention: IndexingConvention
    out: str | None


def format_float(value: float) -> str:
    """17-significant-digit scientific notation; round-trips any finite double."""
    return "%.16e" % value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photon-kick",
        description=(
            "Deterministic single-particle photon-absorption accelerator: "
            "run to the energy fixed point, compare the virtual inertia "
            "factor with the Lorentz factor, or sweep photon energies."
        ),
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    specs = (
        ("run", "iterate to convergence and print a summary"),
        ("compare", "sample alpha and gamma on the velocity-target grid"),
        ("sweep", "one comparison per epsilon; per-entry deviation statistics"),
    )
    for name, help_text in specs:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument(
            "--epsilon",
            help="photon energy / rest energy, in (0, 1); sweep accepts a comma-separated list",
        )
        sub.add_argument("--tolerance", help="stopping threshold on the dilation increment")
        sub.add_argument("--max-steps", help="absorption cap")
        sub.add_argument("--stride", help="record every k-th step (run only)")
        sub.add_argument("--targets", help="comma-separated velocities to force-record")
        sub.add_argument(
            "--convention",
            help="literal | first-kick-undilated (reading of the leading sum term)",
        )
        sub.add_argument("--out", help="CSV destination (default: stdout for compare/sweep)")
        sub.add_argument(
            "--config",
            help=f"key = value config file (fallback: ${CONFIG_ENV_VAR})",
        )
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _parse_float(text: str, flag: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise UsageError(f"invalid number for {flag}: {text!r}") from exc


def _parse_int(text: str, flag: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise UsageError(f"invalid integer for {flag}: {text!r}") from exc


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    items = [item.strip() for item in text.split(",")]
    if any(not item for item in items):
        raise UsageError(f"empty entry in list for {flag}: {text!r}")
    return tuple(_parse_float(item, flag) for item in items)


def parse_args(argv: Sequence[str]) -> CliInvocation:
    """Parse and validate argv into a CliInvocation.

    Precedence per key: command-line flag, then config file (--config or
    $PHOTON_KICK_CONFIG), then built-in default. Raises UsageError on any
    invalid value; argparse itself exits with status 2 on unknown flags.
    """
    namespace = _build_parser().parse_args(argv)
    config_path = namespace.config or os.environ.get(CONFIG_ENV_VAR)
    file_values = _read_config_file(config_path) if config_path else {}

    def pick(key: str, flag_value: str | None) -> str | None:
        return flag_value if flag_value is not None else file_values.get(key)

    epsilon_raw = pick("epsilon", namespace.epsilon)
    if epsilon_raw is None:
        raise UsageError("epsilon is required (--epsilon or config file)")
    epsilons = _parse_float_list(epsilon_raw, "--epsilon")
    if namespace.subcommand != "sweep" and len(epsilons) != 1:
        raise UsageError(f"{namespace.subcommand} takes exactly one epsilon")
    for value in epsilons:
        if not (0.0 < value < 1.0):
            raise UsageError(f"epsilon must lie in (0, 1), got {value!r}")

    tolerance_raw = pick("tolerance", namespace.tolerance)
    tolerance = DEFAULT_TOLERANCE if tolerance_raw is None else _parse_float(tolerance_raw, "--tolerance")
    if not (0.0 < tolerance < 1.0):
        raise UsageError(f"tolerance must lie in (0, 1), got {tolerance!r}")

    max_steps_raw = pick("max-steps", namespace.max_steps)
    max_steps = DEFAULT_MAX_STEPS if max_steps_raw is None else _parse_int(max_steps_raw, "--max-steps")
    if max_steps < 1:
        raise UsageError(f"max-steps must be >= 1, got {max_steps}")

    stride_raw = pick("stride", namespace.stride)
    stride = DEFAULT_STRIDE if stride_raw is None else _parse_int(stride_raw, "--stride")
    if stride < 1:
        raise UsageError(f"stride must be >= 1, got {stride}")

    targets_raw = pick("targets", namespace.targets)
    targets = None if targets_raw is None else _parse_float_list(targets_raw, "--targets")
    if targets is not None:
        for value in targets:
            if not (0.0 < value < 1.0):
                raise UsageError(f"velocity target {value!r} outside (0, 1)")
        if any(b <= a for a, b in zip(targets, targets[1:])):
            raise UsageError("targets must be strictly increasing")

    convention_raw = pick("convention", namespace.convention)
    if convention_raw is None:
        convention = IndexingConvention.FIRST_KICK_UNDILATED
    else:
        try:
            convention = _CONVENTIONS[convention_raw]
        except KeyError:
            raise UsageError(
                f"unknown convention {convention_raw!r} (choose literal or first-kick-undilated)"
            ) from None

    return CliInvocation(
        subcommand=namespace.subcommand,
        epsilons=epsilons,
        tolerance=tolerance,
        max_steps=max_steps,
        stride=stride,
        targets=targets,
        convention=convention,
        out=pick("out", namespace.out),
    )


def _row_line(row: ComparisonRow) -> str:
    floats = (row.u_r, row.u_c, row.energy_interaction, row.energy_str, row.gamma)
    if any(not math.isfinite(value) for value in floats) or (
        row.alpha is not None and not math.isfinite(row.alpha)
    ):
        raise ValueError(f"non-finite value in row n = {row.n}")
    alpha_field = "" if row.alpha is None else format_float(row.alpha)
    return (
        f"{row.n},{format_float(row.u_r)},{format_float(row.u_c)},"
        f"{format_float(row.energy_interaction)},{format_float(row.energy_str)},"
        f"{alpha_field},{format_float(row.gamma)},{1 if row.degenerate else 0}"
    )


def _write_csv_text(stream: IO[str], rows: Iterable[ComparisonRow]) -> None:
    stream.write(CSV_HEADER + "\n")
    for row in rows:
        stream.write(_row_line(row) + "\n")


def emit_csv(rows: Sequence[ComparisonRow], destination: str | IO[str]) -> None:
    """Write the sample rows as CSV to a path or text stream.

    Header and field formats are part of the on-disk contract: LF line
    endings, UTF-8, alpha empty when undefined, degenerate as 0/1.
    """
    try:
        if hasattr(destination, "write"):
            _write_csv_text(destination, rows)  # type: ignore[arg-type]
        else:
            with open(destination, "w", encoding="utf-8", newline="") as handle:
                _write_csv_text(handle, rows)
    except OSError as exc:
        raise IoError(f"cannot write CSV to {destination}: {exc}") from exc


def parse_rows(text: str) -> list[ComparisonRow]:
    """Parse CSV text produced by emit_csv back into rows."""
    lines = text.split("\n")
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {lines[0] if lines else ''!r}")
    if lines and lines[-1] == "":
        lines.pop()
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != 8:
            raise ValueError(f"line {lineno}: expected 8 fields, got {len(fields)}")
        rows.append(
            ComparisonRow(
                n=int(fields[0]),
                u_r=float(fields[1]),
                u_c=float(fields[2]),
                energy_interaction=float(fields[3]),
                energy_str=float(fields[4]),
                alpha=None if fields[5] == "" else float(fields[5]),
                gamma=float(fields[6]),
                degenerate=fields[7] == "1",
            )
        )
    return rows


def read_csv(path: str) -> list[ComparisonRow]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return parse_rows(handle.read())


def emit_summary(summary: experiment.RunSummary, stream: IO[str]) -> None:
    """Write the run summary as stable key=value lines."""
    converged = "true" if summary.converged else "false"
    stream.write(f"converged={converged}\n")
    stream.write(f"steps={summary.steps_taken}\n")
    stream.write(f"final_u={format_float(summary.final_u)}\n")
    stream.write(f"final_kinetic={format_float(summary.final_kinetic)}\n")
    stream.write(f"final_sum={format_float(summary.final_dilation_sum)}\n")
    stream.write(f"convention={summary.convention.value}\n")


def _sweep_line(result: experiment.SweepResult) -> str:
    max_field = "" if result.max_abs_deviation is None else format_float(result.max_abs_deviation)
    mean_field = "" if result.mean_abs_deviation is None else format_float(result.mean_abs_deviation)
    return (
        f"{format_float(result.epsilon)},{max_field},{mean_field},"
        f"{result.sample_count},{1 if result.failed else 0}"
    )


def emit_sweep_csv(results: Sequence[experiment.SweepResult], destination: str | IO[str]) -> None:
    """Write per-epsilon sweep statistics as CSV."""

    def write(stream: IO[str]) -> None:
        stream.write(SWEEP_CSV_HEADER + "\n")
        for result in results:
            stream.write(_sweep_line(result) + "\n")

    try:
        if hasattr(destination, "write"):
            write(destination)  # type: ignore[arg-type]
        else:
            with open(destination, "w", encoding="utf-8", newline="") as handle:
                write(handle)
    except OSError as exc:
        raise IoError(f"cannot write sweep CSV to {destination}: {exc}") from exc


def _build_simulation_config(
    invocation: CliInvocation, epsilon: float, targets: tuple[float, ...] | None
) -> SimulationConfig:
    return SimulationConfig(
        epsilon=epsilon,
        indexing_convention=invocation.convention,
        step_tolerance=invocation.tolerance,
        max_steps=invocation.max_steps,
        sample_stride=invocation.stride,
        velocity_targets=targets,
    )


def _cmd_run(invocation: CliInvocation) -> int:
    config = _build_simulation_config(invocation, invocation.epsilons[0], invocation.targets)
    summary, rows = experiment.run_to_convergence(config)
    if invocation.out is not None:
        emit_csv(rows, invocation.out)
    emit_summary(summary, sys.stdout)
    return 0 if summary.converged else 1


def _cmd_compare(invocation: CliInvocation) -> int:
    targets = invocation.targets or experiment.DEFAULT_COMPARE_TARGETS
    config = _build_simulation_config(invocation, invocation.epsilons[0], targets)
    try:
        rows = experiment.compare_models(config)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    emit_csv(rows, invocation.out if invocation.out is not None else sys.stdout)
    return 0 if len(rows) == len(targets) else 1


def _cmd_sweep(invocation: CliInvocation) -> int:
    targets = invocation.targets or experiment.DEFAULT_COMPARE_TARGETS
    base_config = _build_simulation_config(invocation, invocation.epsilons[0], targets)
    try:
        results = experiment.sweep_epsilon(invocation.epsilons, base_config)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    emit_sweep_csv(results, invocation.out if invocation.out is not None else sys.stdout)
    return 0 if all(not result.failed for result in results) else 1


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    try:
        invocation = parse_args(sys.argv[1:] if argv is None else argv)
        if invocation.subcommand == "run":
            return _cmd_run(invocation)
        if invocation.subcommand == "compare":
            return _cmd_compare(invocation)
        return _cmd_sweep(invocation)
    except UsageError as exc:
        print(f"photon-kick: error: {exc}", file=sys.stderr)
        return 2
    except IoError as exc:
        print(f"photon-kick: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
