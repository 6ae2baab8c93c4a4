"""Run orchestration: convergence studies, model comparisons, epsilon sweeps.

Each run iterates the absorption recurrence until the dilation increment
falls below the configured tolerance, the next quantum would push the energy
past its fixed point, or the step cap is hit. Runs are pure and
deterministic: the same config yields bit-identical summaries and rows, so
sweep entries can execute in any order or in parallel.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .kinematics import (
    ComparisonRow,
    IndexingConvention,
    SimulationConfig,
    comparison_row,
)

# Sampling grid used to compare alpha against gamma: every 0.05 of c up to
# 0.95, then the 0.99 endpoint.
DEFAULT_COMPARE_TARGETS: tuple[float, ...] = tuple(i / 20 for i in range(1, 20)) + (0.99,)


@dataclass(frozen=True)
class RunSummary:
    """Outcome of one run: stopping verdict and the final state numbers."""

    converged: bool
    steps_taken: int
    final_u: float
    final_kinetic: float
    final_dilation_sum: float
    convention: IndexingConvention


@dataclass(frozen=True)
class SweepResult:
    """Deviation statistics of one sweep entry.

    ``max_abs_deviation`` is the headline max of |alpha - gamma| over the
    non-degenerate target samples; ``mean_abs_deviation`` accompanies it.
    Entries whose run could not produce the full sample set are marked
    ``failed`` with the statistics left as None.
    """

    epsilon: float
    max_abs_deviation: float | None
    mean_abs_deviation: float | None
    sample_count: int
    failed: bool


def _drive(
    config: SimulationConfig,
    record_stride: bool,
    record_final: bool,
) -> tuple[RunSummary, list[ComparisonRow]]:
    """Iterate the recurrence to the stopping point, recording samples.

    This loop repeats the arithmetic of kinematics.step verbatim on plain
    floats; building a state object per absorption would dominate the cost
    of million-step runs. tests/test_experiment.py pins the two paths to
    bit-identical velocities.
    """
    eps = config.epsilon
    tol = config.step_tolerance
    cap = config.max_steps
    stride = config.sample_stride
    literal = config.indexing_convention is IndexingConvention.LITERAL
    targets = config.velocity_targets or ()
    n_targets = len(targets)
    sqrt = math.sqrt

    rows: list[ComparisonRow] = []
    n = 0
    u = 0.0
    u_prev = 0.0
    main = 1.0
    carry = 0.0
    t_idx = 0
    converged = False
    state_recorded = True  # the rest state is never emitted
    while True:
        radicand = 1.0 - u * u
        q = sqrt(radicand) if radicand > 0.0 else 0.0
        if q < tol:
            converged = True
            break
        if n >= cap:
            break
        increment = q if (n > 0 or literal) else 0.0
        new_main = main + increment
        if abs(main) >= abs(increment):
            new_carry = carry + ((main - new_main) + increment)
        else:
            new_carry = carry + ((increment - new_main) + main)
        total = new_main + new_carry
        energy = eps * total
        if energy >= 1.0:
            # One more quantum would push the energy past the fixed point;
            # the map cannot resolve the limit more finely than one kick.
            converged = True
            break
        main = new_main
        carry = new_carry
        u_prev = u
        u = sqrt(energy)
        n += 1
        record = record_stride and n % stride == 0
        while t_idx < n_targets and u >= targets[t_idx]:
            record = True
            t_idx += 1
        if record:
            rows.append(comparison_row(n, u, u_prev, eps))
        state_recorded = record
    if record_final and n > 0 and not state_recorded:
        rows.append(comparison_row(n, u, u_prev, eps))
    total = main + carry
    summary = RunSummary(
        converged=converged,
        steps_taken=n,
        final_u=u,
        final_kinetic=0.5 * u * u,
        final_dilation_sum=total,
        convention=config.indexing_convention,
    )
    return summary, rows


def run_to_convergence(
    config: SimulationConfig,
) -> tuple[RunSummary, list[ComparisonRow]]:
    """Run until the stopping rule fires or the step cap is reached.

    Rows are recorded at every ``sample_stride``-th absorption, at the first
    crossing of each velocity target, and at the stopping point. A run that
    hits ``max_steps`` is reported with converged = False rather than an
    error.
    """
    return _drive(config, record_stride=True, record_final=True)


def _require_compare_targets(config: SimulationConfig) -> SimulationConfig:
    if config.velocity_targets is None:
        config = replace(config, velocity_targets=DEFAULT_COMPARE_TARGETS)
    targets = config.velocity_targets
    assert targets is not None
    if targets[0] > 0.05 or targets[-1] < 0.99:
        raise ValueError(
            "velocity targets must cover [0.05, 0.99] for a model comparison"
        )
    return config


def compare_models(config: SimulationConfig) -> list[ComparisonRow]:
    """Sample alpha, gamma, and both energies on the velocity-target grid.

    Exactly one row is produced per crossed target (degenerate alpha rows
    are flagged, never dropped), so the row set is the comparison sample
    set itself: no stride or endpoint rows are mixed in.
    """
    config = _require_compare_targets(config)
    _, rows = _drive(config, record_stride=False, record_final=False)
    return rows


def _sweep_entry(config: SimulationConfig) -> SweepResult:
    expected = len(config.velocity_targets or DEFAULT_COMPARE_TARGETS)
    try:
        rows = compare_models(config)
    except Exception:
        return SweepResult(
            epsilon=config.epsilon,
            max_abs_deviation=None,
            mean_abs_deviation=None,
            sample_count=0,
            failed=True,
        )
    deviations = deviation_window(rows)
    if len(rows) < expected or not deviations:
        return SweepResult(
            epsilon=config.epsilon,
            max_abs_deviation=None,
            mean_abs_deviation=None,
            sample_count=len(deviations),
            failed=True,
        )
    return SweepResult(
        epsilon=config.epsilon,
        max_abs_deviation=max(deviations),
        mean_abs_deviation=math.fsum(deviations) / len(deviations),
        sample_count=len(deviations),
        failed=False,
    )


def sweep_epsilon(
    epsilons: Iterable[float],
    base_config: SimulationConfig,
    workers: int = 1,
) -> list[SweepResult]:
    """Run one model comparison per epsilon and collect deviation statistics.

    Results are returned in input order regardless of execution order, and
    ``workers > 1`` fans the independent runs out across processes. A run
    that cannot produce the full sample set (e.g. capped before covering
    the targets) is recorded as a failed entry without aborting the sweep.
    """
    epsilon_list = list(epsilons)
    if not epsilon_list:
        raise ValueError("sweep needs at least one epsilon")
    base_config = _require_compare_targets(base_config)
    configs = [replace(base_config, epsilon=eps) for eps in epsilon_list]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_entry, configs))
    return [_sweep_entry(cfg) for cfg in configs]


def deviation_window(rows: Sequence[ComparisonRow]) -> list[float]:
    """|alpha - gamma| for every non-degenerate row carrying an alpha."""
    return [
        abs(row.alpha - row.gamma)
        for row in rows
        if row.alpha is not None and not row.degenerate
    ]
