"""Acceptance gate: every headline claim checked at its stated tolerance.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or on
failure) and asserts the same condition, so the module doubles as a
human-readable report of the claims:

 1. energy limit        kinetic energy converges to 0.5 within 1e-5
 2. fixed point         |eps * S - 1| <= 1e-5, non-loosening in tolerance
 3. alpha vs gamma      max |alpha - gamma| <= 5e-4 on the 0.05..0.99 grid
 4. deviation scaling   max deviation non-increasing as eps halves
 5. low-velocity match  |EI - ES| / ES <= 2e-3 on every row with u <= 0.2
 6. oracle equivalence  naive re-evaluation matches the engine to 1e-12
 7. property suite      monotone velocity, energy closure, alpha identity,
                        CSV byte round-trip, exit-code contract
"""

from __future__ import annotations

import io
import math
import sys
import time
from fractions import Fraction

import pytest

from photon_kick import (
    DEFAULT_COMPARE_TARGETS,
    IndexingConvention,
    ParticleState,
    SimulationConfig,
    compare_models,
    run_to_convergence,
    step,
    sweep_epsilon,
)
from photon_kick.cli import emit_csv, main, parse_rows
from photon_kick.kinematics import alpha, classical_velocity, delta_u_classical

EPSILON_FIG = 4e-6  # photon energy used for the headline figures
EPS_MACH = sys.float_info.epsilon
FIRST_KICK = IndexingConvention.FIRST_KICK_UNDILATED


def check(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def convergence_run():
    config = SimulationConfig(epsilon=EPSILON_FIG, indexing_convention=FIRST_KICK,
                              step_tolerance=1e-6)
    started = time.perf_counter()
    summary, rows = run_to_convergence(config)
    elapsed = time.perf_counter() - started
    return config, summary, rows, elapsed


@pytest.fixture(scope="module")
def comparison_rows():
    config = SimulationConfig(epsilon=EPSILON_FIG, indexing_convention=FIRST_KICK,
                              velocity_targets=DEFAULT_COMPARE_TARGETS)
    return compare_models(config)


def test_energy_limit(convergence_run):
    config, summary, _, elapsed = convergence_run
    gap = abs(summary.final_kinetic - 0.5)
    ok = summary.converged and gap <= 1e-5 and elapsed < 10.0
    check(
        "energy limit",
        ok,
        f"converged={summary.converged} steps={summary.steps_taken} "
        f"|kinetic-0.5|={gap:.3e} (tol 1e-5) in {elapsed:.2f}s (< 10s)",
    )


def test_fixed_point_identity(convergence_run):
    config, summary, _, _ = convergence_run
    residual = abs(config.epsilon * summary.final_dilation_sum - 1.0)
    tighter = SimulationConfig(epsilon=EPSILON_FIG, indexing_convention=FIRST_KICK,
                               step_tolerance=1e-7)
    tighter_summary, _ = run_to_convergence(tighter)
    tighter_residual = abs(tighter.epsilon * tighter_summary.final_dilation_sum - 1.0)
    ok = residual <= 1e-5 and tighter_residual <= residual
    check(
        "fixed point identity",
        ok,
        f"|eps*S-1|={residual:.3e} (tol 1e-5), tol=1e-7 run gives "
        f"{tighter_residual:.3e} (monotone)",
    )


def test_alpha_gamma_agreement(comparison_rows):
    usable = [row for row in comparison_rows if row.alpha is not None and not row.degenerate]
    deviations = [abs(row.alpha - row.gamma) for row in usable]
    worst = max(deviations)
    half = next(row for row in usable if abs(row.u_r - 0.5) < 0.02)
    fast = usable[-1]
    ok = (
        len(comparison_rows) == len(DEFAULT_COMPARE_TARGETS)
        and worst <= 5e-4
        and abs(half.alpha - half.gamma) <= 1e-4
        and abs(fast.alpha - fast.gamma) <= 1e-3
    )
    check(
        "alpha-gamma agreement",
        ok,
        f"max|alpha-gamma|={worst:.3e} over {len(usable)} samples (tol 5e-4); "
        f"u=0.5 sample {abs(half.alpha - half.gamma):.2e}, "
        f"u=0.99 sample {abs(fast.alpha - fast.gamma):.2e}",
    )


def test_deviation_frequency_scaling():
    base = SimulationConfig(epsilon=EPSILON_FIG, indexing_convention=FIRST_KICK)
    results = sweep_epsilon([8e-6, 4e-6, 2e-6], base)
    deviations = [r.max_abs_deviation for r in results]
    ok = (
        all(not r.failed for r in results)
        and deviations[0] >= deviations[1] >= deviations[2]
    )
    check(
        "deviation-frequency scaling",
        ok,
        "max deviations " + " >= ".join(f"{d:.3e}" for d in deviations),
    )


def test_low_velocity_agreement(convergence_run, comparison_rows):
    _, _, run_rows, _ = convergence_run
    slow = [row for row in list(run_rows) + list(comparison_rows) if row.u_r <= 0.2]
    gaps = [abs(row.energy_interaction - row.energy_str) / row.energy_str for row in slow]
    worst = max(gaps)
    ok = len(slow) >= 10 and worst <= 2e-3
    check(
        "low-velocity agreement",
        ok,
        f"max relative |EI-ES|={worst:.3e} over {len(slow)} rows with u <= 0.2 (tol 2e-3)",
    )


def naive_velocities(epsilon: float, count: int) -> list[float]:
    """Direct re-evaluation of the recurrence with plain summation."""
    velocities = []
    u = 0.0
    bracket = 1.0
    for n in range(1, count + 1):
        if n > 1:  # the leading 1 already covers the first, undilated kick
            bracket += math.sqrt(1.0 - u * u)
        u = math.sqrt(epsilon * bracket)
        velocities.append(u)
    return velocities


def test_oracle_equivalence():
    details = []
    ok = True
    for epsilon in (0.25, 0.01):
        config = SimulationConfig(epsilon=epsilon, indexing_convention=FIRST_KICK,
                                  sample_stride=1, max_steps=10_000)
        _, rows = run_to_convergence(config)
        expected = naive_velocities(epsilon, len(rows))
        worst = max(
            abs(row.u_r - reference) / reference
            for row, reference in zip(rows, expected)
        )
        ok = ok and len(rows) <= 10_000 and worst <= 1e-12
        details.append(f"eps={epsilon}: {len(rows)} steps, max rel diff {worst:.2e}")
    check("oracle equivalence", ok, "; ".join(details) + " (tol 1e-12)")


def test_property_suite(comparison_rows):
    config = SimulationConfig(epsilon=1e-4, sample_stride=1)
    _, rows = run_to_convergence(config)

    # Monotone bounded velocity until the stopping rule fires.
    velocities = [row.u_r for row in rows]
    monotone = all(a < b for a, b in zip(velocities, velocities[1:]))
    bounded = all(0.0 < u < 1.0 for u in velocities)

    # Energy closure u^2 = eps * S along a stepped trajectory.
    closure = True
    state = ParticleState.at_rest(config)
    for _ in range(2000):
        state = step(state, config)
        drift = abs(state.u * state.u - config.epsilon * state.dilation_sum)
        closure = closure and drift <= 4 * EPS_MACH * config.epsilon * state.dilation_sum

    # Alpha identity against the exactly-evaluated product form, on real
    # consecutive pairs (stride-1 rows are consecutive steps).
    identity = True
    for prev, row in list(zip(rows, rows[1:]))[::97]:
        if row.alpha is None or row.n != prev.n + 1:
            continue
        du_c = delta_u_classical(row.n, config.epsilon)
        u_c = classical_velocity(row.n, config.epsilon)
        exact = (
            Fraction(du_c) * Fraction(u_c)
            / (Fraction(row.u_r - prev.u_r) * Fraction(row.u_r))
        )
        identity = identity and abs(Fraction(row.alpha) - exact) <= 2 * Fraction(EPS_MACH) * exact

    # CSV round-trip byte identity on real comparison output.
    first = io.StringIO()
    emit_csv(comparison_rows, first)
    second = io.StringIO()
    emit_csv(parse_rows(first.getvalue()), second)
    round_trip = first.getvalue().encode("utf-8") == second.getvalue().encode("utf-8")

    # Exit-code contract: 0 converged, 1 capped, 2 usage, 3 write failure.
    codes = (
        main(["run", "--epsilon", "0.01"]),
        main(["run", "--epsilon", "0.01", "--max-steps", "3"]),
        main(["run", "--epsilon", "2"]),
        main(["run", "--epsilon", "0.01", "--out", "/proc/definitely/not/writable.csv"]),
    )
    exit_contract = codes == (0, 1, 2, 3)

    ok = monotone and bounded and closure and identity and round_trip and exit_contract
    check(
        "property suite",
        ok,
        f"monotone={monotone} bounded={bounded} closure={closure} "
        f"alpha-identity={identity} csv-round-trip={round_trip} exit-codes={codes}",
    )
