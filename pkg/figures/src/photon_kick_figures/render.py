"""Render SVG figures from photon-kick sample CSVs.

The CSV contract is consumed strictly: the header must match byte for byte
(unknown columns are an error, not a warning) and every field must parse.
Rendering is deterministic for a given file and spec: fixed canvas, fixed
SVG hash salt, no embedded timestamps.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

CSV_HEADER = "n,u_r,u_c,energy_interaction,energy_str,alpha,gamma,degenerate"

_RC_DETERMINISTIC = {
    "svg.hashsalt": "photon-kick-figures",
    "svg.fonttype": "none",
}


class FormatError(Exception):
    """The input CSV is missing or violates the format contract (exit 3)."""


@dataclass(frozen=True)
class SampleRow:
    n: int
    u_r: float
    u_c: float
    energy_interaction: float
    energy_str: float
    alpha: float | None
    gamma: float
    degenerate: bool


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input CSV, figure selector, output path, axis ranges."""

    csv_path: str
    figure: str  # "energy" | "inertia"
    out_path: str
    u_range: tuple[float, float] = (0.0, 1.0)
    energy_range: tuple[float, float] = (1.0, 2.0)

    def __post_init__(self) -> None:
        if self.figure not in ("energy", "inertia"):
            raise ValueError(f"figure must be 'energy' or 'inertia', got {self.figure!r}")


@dataclass(frozen=True)
class RenderResult:
    """What was drawn, including the quantities annotated on the figure."""

    figure: str
    out_path: str
    rows_used: int
    final_ei: float | None
    residual_max: float | None


def _parse_float(field: str, lineno: int, column: str) -> float:
    try:
        value = float(field)
    except ValueError as exc:
        raise FormatError(f"line {lineno}: bad {column} value {field!r}") from exc
    if not math.isfinite(value):
        raise FormatError(f"line {lineno}: non-finite {column} value {field!r}")
    return value


def read_rows(path: str) -> list[SampleRow]:
    """Read and validate a photon-kick sample CSV."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            text = handle.read()
    except OSError as exc:
        raise FormatError(f"cannot read input CSV {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != CSV_HEADER:
        raise FormatError(
            f"unexpected CSV header in {path}: expected {CSV_HEADER!r}, "
            f"got {lines[0] if lines else ''!r}"
        )
    rows: list[SampleRow] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != 8:
            raise FormatError(f"line {lineno}: expected 8 fields, got {len(fields)}")
        try:
            n = int(fields[0])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: bad step index {fields[0]!r}") from exc
        if fields[7] not in ("0", "1"):
            raise FormatError(f"line {lineno}: degenerate flag must be 0 or 1, got {fields[7]!r}")
        rows.append(
            SampleRow(
                n=n,
                u_r=_parse_float(fields[1], lineno, "u_r"),
                u_c=_parse_float(fields[2], lineno, "u_c"),
                energy_interaction=_parse_float(fields[3], lineno, "energy_interaction"),
                energy_str=_parse_float(fields[4], lineno, "energy_str"),
                alpha=None if fields[5] == "" else _parse_float(fields[5], lineno, "alpha"),
                gamma=_parse_float(fields[6], lineno, "gamma"),
                degenerate=fields[7] == "1",
            )
        )
    if not rows:
        raise FormatError(f"{path} has no data rows, nothing to plot")
    return rows


def _render_energy(spec: FigureSpec, rows: list[SampleRow]) -> RenderResult:
    rows = sorted(rows, key=lambda row: row.n)
    u = [row.u_r for row in rows]
    ei = [row.energy_interaction for row in rows]
    es = [row.energy_str for row in rows]
    final_ei = ei[-1]

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(u, ei, label="interaction model (EI)", color="tab:blue")
    # The relativistic curve diverges near u = 1; the y-range caps it.
    ax.plot(u, es, label="relativistic model (ES)", color="tab:orange", linestyle="--")
    ax.axhline(1.5, color="gray", linewidth=0.8, linestyle=":")
    ax.set_xlim(*spec.u_range)
    ax.set_ylim(*spec.energy_range)
    ax.set_xlabel("velocity u (units of c)")
    ax.set_ylabel("energy (units of m c^2)")
    ax.annotate(
        f"final EI = {final_ei:.6f}",
        xy=(u[-1], min(final_ei, spec.energy_range[1])),
        xytext=(0.45, 0.55),
        textcoords="axes fraction",
        arrowprops={"arrowstyle": "->", "linewidth": 0.8},
    )
    ax.legend(loc="upper left")
    ax.set_title("Energy vs velocity: bounded interaction model, divergent ES")
    _save(fig, spec.out_path)
    return RenderResult(
        figure="energy",
        out_path=spec.out_path,
        rows_used=len(rows),
        final_ei=final_ei,
        residual_max=None,
    )


def _render_inertia(spec: FigureSpec, rows: list[SampleRow]) -> RenderResult:
    usable = sorted(
        (row for row in rows if row.alpha is not None and not row.degenerate),
        key=lambda row: row.n,
    )
    if not usable:
        raise FormatError("no non-degenerate rows with alpha: cannot draw the inertia figure")
    u = [row.u_r for row in usable]
    alpha = [row.alpha for row in usable]
    gamma = [row.gamma for row in usable]
    residuals = [abs(a - g) for a, g in zip(alpha, gamma)]
    residual_max = max(residuals)

    fig, (ax_top, ax_res) = plt.subplots(
        2, 1, figsize=(6.4, 5.6), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]},
    )
    ax_top.plot(u, gamma, label="Lorentz factor gamma", color="tab:orange")
    ax_top.plot(u, alpha, label="virtual inertia alpha", color="tab:blue",
                linestyle="none", marker="o", markersize=3.5)
    ax_top.set_ylabel("inertia factor")
    ax_top.legend(loc="upper left")
    ax_top.set_title("Virtual inertia vs Lorentz factor")

    ax_res.plot(u, residuals, color="tab:green", marker=".", linestyle="-")
    ax_res.axhspan(0.0, residual_max, color="tab:green", alpha=0.15)
    ax_res.axhline(residual_max, color="tab:green", linewidth=0.8, linestyle=":")
    ax_res.set_xlim(*spec.u_range)
    ax_res.set_ylim(bottom=0.0)
    ax_res.set_xlabel("velocity u (units of c)")
    ax_res.set_ylabel("|alpha - gamma|")
    ax_res.annotate(
        f"max |alpha - gamma| = {residual_max:.3e}",
        xy=(0.02, 0.78),
        xycoords="axes fraction",
    )
    _save(fig, spec.out_path)
    return RenderResult(
        figure="inertia",
        out_path=spec.out_path,
        rows_used=len(usable),
        final_ei=None,
        residual_max=residual_max,
    )


def _save(fig, out_path: str) -> None:
    try:
        fig.savefig(out_path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise OSError(f"cannot write figure to {out_path}: {exc}") from exc
    finally:
        plt.close(fig)


def render(spec: FigureSpec) -> RenderResult:
    """Render the selected figure and return the annotated quantities."""
    rows = read_rows(spec.csv_path)
    with plt.rc_context(_RC_DETERMINISTIC):
        if spec.figure == "energy":
            return _render_energy(spec, rows)
        return _render_inertia(spec, rows)


def _parse_range(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"{flag} expects 'low,high', got {text!r}")
    try:
        low, high = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"{flag} expects two numbers, got {text!r}") from None
    if not low < high:
        raise argparse.ArgumentTypeError(f"{flag} needs low < high, got {text!r}")
    return low, high


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render SVG figures from photon-kick sample CSVs.",
    )
    parser.add_argument("csv", help="input CSV emitted by photon-kick run/compare")
    parser.add_argument("--figure", required=True, choices=("energy", "inertia"))
    parser.add_argument("--out", required=True, help="output SVG path")
    parser.add_argument(
        "--u-range", type=lambda text: _parse_range(text, "--u-range"), default=(0.0, 1.0)
    )
    parser.add_argument(
        "--energy-range",
        type=lambda text: _parse_range(text, "--energy-range"),
        default=(1.0, 2.0),
    )
    namespace = parser.parse_args(argv)
    spec = FigureSpec(
        csv_path=namespace.csv,
        figure=namespace.figure,
        out_path=namespace.out,
        u_range=namespace.u_range,
        energy_range=namespace.energy_range,
    )
    try:
        result = render(spec)
    except FormatError as exc:
        print(f"render_figures: error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"render_figures: error: {exc}", file=sys.stderr)
        return 4
    print(f"figure={result.figure}")
    print(f"out={result.out_path}")
    print(f"rows={result.rows_used}")
    if result.final_ei is not None:
        print("final_ei=%.16e" % result.final_ei)
    if result.residual_max is not None:
        print("residual_max=%.16e" % result.residual_max)
    return 0


if __name__ == "__main__":
    sys.exit(main())
