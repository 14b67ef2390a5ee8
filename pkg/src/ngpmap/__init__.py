"""Deterministic simulator and analysis toolkit for the kicked rotor with a
complex nonlinear interaction strength (the non-Hermitian Gross-Pitaevskii
map), built on spectral split-step propagation.
"""

from .analysis import (
    FitError,
    FitResult,
    NonPositiveDataError,
    NoValidWindowError,
    TransformDomainError,
    UnresolvedThresholdError,
    WindowTooSmallError,
    default_growth_window,
    energy_step_diagnostic,
    estimate_eta_c,
    fit_exponential,
    fit_growth_models,
    fit_superexponential,
    norm_growth_slope,
    select_fit_window,
    superexponential_window,
)
from .evolution import (
    DEFAULT_GUARDS,
    EvolutionGuards,
    GuardError,
    NormOverflowError,
    Trajectory,
    TruncationError,
    apply_free,
    apply_kick,
    check_truncation,
    evolve_trajectory,
    floquet_step,
)
from .experiments import run_loschmidt_experiment, run_pair_experiment
from .grid import ModelParams, SpatialGrid, make_grid
from .observables import (
    ObservableRecord,
    distance,
    edge_fraction,
    fidelity,
    fotoc,
    mean_energy,
    mean_momentum,
    momentum_moments,
)
from .state import WaveState, inner_product, make_gaussian, to_momentum, to_position, translate

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GUARDS",
    "EvolutionGuards",
    "FitError",
    "FitResult",
    "GuardError",
    "ModelParams",
    "NonPositiveDataError",
    "NormOverflowError",
    "NoValidWindowError",
    "ObservableRecord",
    "SpatialGrid",
    "Trajectory",
    "TransformDomainError",
    "TruncationError",
    "UnresolvedThresholdError",
    "WaveState",
    "WindowTooSmallError",
    "apply_free",
    "apply_kick",
    "check_truncation",
    "default_growth_window",
    "distance",
    "edge_fraction",
    "energy_step_diagnostic",
    "estimate_eta_c",
    "evolve_trajectory",
    "fidelity",
    "fit_exponential",
    "fit_growth_models",
    "fit_superexponential",
    "floquet_step",
    "fotoc",
    "inner_product",
    "make_gaussian",
    "make_grid",
    "mean_energy",
    "mean_momentum",
    "momentum_moments",
    "norm_growth_slope",
    "run_loschmidt_experiment",
    "run_pair_experiment",
    "select_fit_window",
    "superexponential_window",
    "to_momentum",
    "to_position",
    "translate",
]
