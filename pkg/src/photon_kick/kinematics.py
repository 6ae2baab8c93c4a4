"""Per-step kinematics of the photon-absorption acceleration model.

A particle starts at rest and absorbs identical photons from a source at
rest. Each absorbed quantum arrives diminished by the particle's own
time-dilation factor sqrt(1 - u^2), so the accumulated energy is

    E_n = epsilon * S_n,        S_n = 1 + sum_i sqrt(1 - u_i^2),

and the velocity closes the step through E_n = m u_n^2. Everything here is
dimensionless (m = c = 1); ``epsilon`` is the photon energy in units of the
rest energy and is the only physics parameter.

The module also carries the comparison quantities used to contrast this
model with standard special relativity: the classical (dilation-free)
velocity ladder sqrt(n * epsilon), the Lorentz factor, and the virtual
inertia factor ``alpha`` built from the ratio of classical to dilated
velocity increments.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass

from .errors import CapReached, DegenerateStep, DomainError, NonMonotone

# Velocity increments below this are indistinguishable from rounding noise;
# alpha cannot be evaluated reliably on such a step.
DEGENERATE_INCREMENT_FLOOR = 1e3 * sys.float_info.epsilon

# How far 1 - u^2 may dip below zero before it stops looking like harmless
# floating-point jitter and starts looking like a corrupted state.
RADICAND_SLACK = 1e-12


class IndexingConvention(enum.Enum):
    """How the leading "1 +" term of the dilation sum is read.

    ``LITERAL`` applies a dilation increment on every absorption, so the
    first kick from rest deposits two quanta (the leading 1 plus an
    undilated sqrt(1 - 0) term). ``FIRST_KICK_UNDILATED`` treats the leading
    1 as already accounting for the first, undilated kick, so the first
    absorption deposits exactly one quantum. The two runs differ by a single
    quantum and share every limit.
    """

    LITERAL = "literal"
    FIRST_KICK_UNDILATED = "first-kick-undilated"


@dataclass(frozen=True)
class SimulationConfig:
    """Dimensionless parameters of one run.

    ``epsilon`` is the photon energy over the rest energy, in (0, 1).
    ``step_tolerance`` stops the run once the per-step dilation increment
    sqrt(1 - u^2) falls below it. ``sample_stride`` records every k-th step;
    ``velocity_targets`` force-records the first step crossing each target.
    """

    epsilon: float
    indexing_convention: IndexingConvention = IndexingConvention.FIRST_KICK_UNDILATED
    step_tolerance: float = 1e-6
    max_steps: int = 10_000_000
    sample_stride: int = 1000
    velocity_targets: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        if not (0.0 < self.step_tolerance < 1.0):
            raise ValueError(
                f"step_tolerance must lie in (0, 1), got {self.step_tolerance!r}"
            )
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps!r}")
        if self.sample_stride < 1:
            raise ValueError(f"sample_stride must be >= 1, got {self.sample_stride!r}")
        if self.velocity_targets is not None:
            targets = tuple(self.velocity_targets)
            object.__setattr__(self, "velocity_targets", targets)
            if not targets:
                raise ValueError("velocity_targets must be non-empty when given")
            for value in targets:
                if not (0.0 < value < 1.0):
                    raise ValueError(f"velocity target {value!r} outside (0, 1)")
            if any(b <= a for a, b in zip(targets, targets[1:])):
                raise ValueError("velocity_targets must be strictly increasing")


@dataclass(frozen=True)
class ParticleState:
    """State after ``n`` absorptions.

    ``dilation_sum`` is the accumulated bracket S (compensated value);
    ``sum_main``/``sum_carry`` hold the two-word accumulator so stepping can
    resume bit-exactly. ``interaction_energy`` is epsilon * S, and the
    closure u^2 = epsilon * S holds for every n >= 1.
    """

    n: int
    u: float
    dilation_sum: float
    interaction_energy: float
    sum_main: float
    sum_carry: float

    @classmethod
    def at_rest(cls, config: SimulationConfig) -> "ParticleState":
        return cls(
            n=0,
            u=0.0,
            dilation_sum=1.0,
            interaction_energy=config.epsilon,
            sum_main=1.0,
            sum_carry=0.0,
        )


@dataclass(frozen=True)
class ComparisonRow:
    """One recorded sample contrasting the absorption and STR pictures.

    ``alpha`` is None at n = 0 and on degenerate steps (velocity increment
    below the rounding noise floor); such rows are flagged, not dropped.
    """

    n: int
    u_r: float
    u_c: float
    energy_interaction: float
    energy_str: float
    alpha: float | None
    gamma: float
    degenerate: bool


def accumulate(main: float, carry: float, term: float) -> tuple[float, float]:
    """Add ``term`` to the two-word accumulator (main, carry).

    Error-compensated (Kahan-Babuska) running sum: the rounding error of
    every addition is recovered into ``carry``. The sum gathers ~1/epsilon
    shrinking terms, and the fixed-point residual would drown in naive
    rounding error long before the stopping rule fires.
    """
    new_main = main + term
    if abs(main) >= abs(term):
        carry += (main - new_main) + term
    else:
        carry += (term - new_main) + main
    return new_main, carry


def step(state: ParticleState, config: SimulationConfig) -> ParticleState:
    """Absorb one photon and return the new state.

    The deposited quantum is scaled by the dilation factor sqrt(1 - u^2) of
    the current state, except for the first kick under the
    FIRST_KICK_UNDILATED convention, which is already covered by the leading
    term of the sum. Radicands within ``RADICAND_SLACK`` below zero are
    clamped; anything lower raises DomainError.

    Raises CapReached once ``config.max_steps`` absorptions have happened.
    """
    if state.n >= config.max_steps:
        raise CapReached(f"step cap {config.max_steps} reached")
    first_kick = state.n == 0
    if first_kick and config.indexing_convention is IndexingConvention.FIRST_KICK_UNDILATED:
        increment = 0.0
    else:
        radicand = 1.0 - state.u * state.u
        if radicand < -RADICAND_SLACK:
            raise DomainError(
                f"1 - u^2 = {radicand!r} at n = {state.n}: epsilon too large or state corrupted"
            )
        increment = math.sqrt(radicand) if radicand > 0.0 else 0.0
    main, carry = accumulate(state.sum_main, state.sum_carry, increment)
    total = main + carry
    energy = config.epsilon * total
    return ParticleState(
        n=state.n + 1,
        u=math.sqrt(energy),
        dilation_sum=total,
        interaction_energy=energy,
        sum_main=main,
        sum_carry=carry,
    )


def classical_velocity(n: int, epsilon: float) -> float:
    """Velocity after n dilation-free kicks: sqrt(n * epsilon).

    The classical ladder ignores time dilation, so it crosses u = 1 in a
    finite number of steps; values >= 1 are meaningful here.
    """
    if n < 0:
        raise ValueError(f"step index must be >= 0, got {n}")
    return math.sqrt(n * epsilon)


def delta_u_classical(n: int, epsilon: float) -> float:
    """Classical velocity gain of kick n: sqrt(epsilon) * (sqrt(n) - sqrt(n-1)).

    Evaluated as sqrt(epsilon) / (sqrt(n) + sqrt(n-1)), which is the same
    number without the subtractive cancellation at large n.
    """
    if n < 1:
        raise ValueError(f"step index must be >= 1, got {n}")
    return math.sqrt(epsilon) / (math.sqrt(n) + math.sqrt(n - 1))


def delta_u_relativistic(u_n: float, u_prev: float) -> float:
    """Velocity gain of one absorption, u_n - u_prev.

    Raises NonMonotone if the velocities decreased, since the dilation sum
    only grows and a drop can only mean a bookkeeping bug upstream.
    """
    if u_n < u_prev:
        raise NonMonotone(f"velocity decreased: {u_prev!r} -> {u_n!r}")
    return u_n - u_prev


def lorentz_gamma(u: float) -> float:
    """Lorentz factor 1 / sqrt(1 - u^2) for u in [0, 1)."""
    if not 0.0 <= u < 1.0:
        raise DomainError(f"velocity must lie in [0, 1), got {u!r}")
    return 1.0 / math.sqrt(1.0 - u * u)


def str_energy(u: float) -> float:
    """Special-relativistic total energy gamma(u), in units of the rest energy.

    For u << 1 this agrees with 1 + u^2/2 to fourth order in u.
    """
    return lorentz_gamma(u)


def interaction_energy_plot(u: float) -> float:
    """Plotted energy of the absorption model: 1 + u^2 / 2.

    Half of the model's total energy m u^2 is kinetic (the other half is
    intrinsic), and the rest energy is added back so the curve is directly
    comparable with gamma(u).
    """
    return 1.0 + 0.5 * u * u


def alpha(n: int, u_n: float, u_prev: float, epsilon: float) -> float:
    """Virtual inertia factor of step n.

    The classical picture attributes the shrinking velocity gains of the
    dilated model to a growing inertia. Correcting that apparent inertia by
    the ratio of classical to actual velocity gives

        alpha = (delta_u_classical / delta_u_relativistic) * (u_c / u_r),

    which tracks the Lorentz factor over the whole velocity range.

    Raises DegenerateStep when u_n - u_prev is below
    DEGENERATE_INCREMENT_FLOOR; callers must decimate more coarsely or raise
    epsilon to resolve alpha there.
    """
    if n < 1:
        raise ValueError(f"alpha is undefined before the first kick, got n = {n}")
    du_r = delta_u_relativistic(u_n, u_prev)
    if du_r < DEGENERATE_INCREMENT_FLOOR:
        raise DegenerateStep(
            f"velocity increment {du_r!r} at n = {n} is below the noise floor"
        )
    du_c = delta_u_classical(n, epsilon)
    u_c = classical_velocity(n, epsilon)
    return (du_c / du_r) * (u_c / u_n)


def comparison_row(n: int, u_n: float, u_prev: float, epsilon: float) -> ComparisonRow:
    """Assemble the full per-sample record for step n.

    ``u_prev`` must be the raw velocity of step n - 1 so that alpha is built
    from a genuine consecutive pair even on a decimated sample grid.
    """
    if n >= 1:
        try:
            alpha_value: float | None = alpha(n, u_n, u_prev, epsilon)
            degenerate = False
        except DegenerateStep:
            alpha_value = None
            degenerate = True
    else:
        alpha_value = None
        degenerate = False
    return ComparisonRow(
        n=n,
        u_r=u_n,
        u_c=classical_velocity(n, epsilon),
        energy_interaction=interaction_energy_plot(u_n),
        energy_str=str_energy(u_n),
        alpha=alpha_value,
        gamma=lorentz_gamma(u_n),
        degenerate=degenerate,
    )
