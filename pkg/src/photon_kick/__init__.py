"""Deterministic simulator of single-particle acceleration by photon absorption.

A particle at rest absorbs identical photons whose deposited energy shrinks
with the particle's own time dilation. The kinetic energy then converges to
half the rest energy instead of diverging, while the apparent inertia grows
exactly like the Lorentz factor. The package exposes the per-step
kinematics, run/comparison/sweep orchestration, and a CLI that emits
analysis-ready CSV.
"""

from .errors import (
    CapReached,
    DegenerateStep,
    DomainError,
    IoError,
    NonMonotone,
    PhotonKickError,
    UsageError,
)
from .experiment import (
    DEFAULT_COMPARE_TARGETS,
    RunSummary,
    SweepResult,
    compare_models,
    run_to_convergence,
    sweep_epsilon,
)
from .kinematics import (
    ComparisonRow,
    IndexingConvention,
    ParticleState,
    SimulationConfig,
    alpha,
    classical_velocity,
    comparison_row,
    delta_u_classical,
    delta_u_relativistic,
    interaction_energy_plot,
    lorentz_gamma,
    step,
    str_energy,
)

__version__ = "0.1.0"

__all__ = [
    "CapReached",
    "ComparisonRow",
    "DEFAULT_COMPARE_TARGETS",
    "DegenerateStep",
    "DomainError",
    "IndexingConvention",
    "IoError",
    "NonMonotone",
    "ParticleState",
    "PhotonKickError",
    "RunSummary",
    "SimulationConfig",
    "SweepResult",
    "UsageError",
    "alpha",
    "classical_velocity",
    "compare_models",
    "comparison_row",
    "delta_u_classical",
    "delta_u_relativistic",
    "interaction_energy_plot",
    "lorentz_gamma",
    "run_to_convergence",
    "step",
    "str_energy",
    "sweep_epsilon",
]
