"""Per-kick measurements: momentum moments, fidelity, distance, and the
translation-operator correlator.

All fidelity-like quantities divide by both state norms.  The amplifying
kick destroys norm conservation, and without the normalisation the
distance and the correlator would leave [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ModelParams
from .state import WaveState, inner_product, to_momentum, translate

# Rounding slack for quantities that are exactly bounded in exact arithmetic.
BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class ObservableRecord:
    """One measurement row, taken at kick index t = 0, 1, 2, ...

    log_norm is 2*log_amplitude (the log of the physical squared norm).
    distance, one_minus_fotoc and one_minus_le are None when the run does
    not measure them; terminated carries the guard reason on the last
    recorded kick of a stopped trajectory.
    """

    kick_index: int
    log_norm: float
    mean_p: float
    mean_p2: float
    edge_mass: float
    distance: float | None = None
    one_minus_fotoc: float | None = None
    one_minus_le: float | None = None
    terminated: str | None = None

    def __post_init__(self):
        if self.kick_index < 0:
            raise ValueError(f"kick_index must be >= 0, got {self.kick_index}")
        if self.mean_p2 < self.mean_p**2 - BOUND_SLACK:
            raise ValueError(
                f"momentum variance is negative: mean_p2={self.mean_p2}, mean_p={self.mean_p}"
            )
        for name in ("distance", "one_minus_fotoc", "one_minus_le"):
            value = getattr(self, name)
            if value is not None and not (-BOUND_SLACK <= value <= 1.0 + BOUND_SLACK):
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    @property
    def variance_p(self) -> float:
        return self.mean_p2 - self.mean_p**2


def momentum_moments(state: WaveState, params: ModelParams) -> tuple[float, float]:
    """Normalised first and second moments of p = hbar_eff * n."""
    weights = np.abs(to_momentum(state)) ** 2
    total = float(np.sum(weights))
    p = params.hbar_eff * state.grid.momentum_indices.astype(np.float64)
    mean_p = float(np.sum(p * weights)) / total
    mean_p2 = float(np.sum(p * p * weights)) / total
    return mean_p, mean_p2


def mean_momentum(state: WaveState, params: ModelParams) -> float:
    """<p>, independent of amplitude scaling and log_amplitude."""
    return momentum_moments(state, params)[0]


def mean_energy(state: WaveState, params: ModelParams) -> float:
    """<p^2>, the (doubled) kinetic energy in momentum-squared units."""
    return momentum_moments(state, params)[1]


def fidelity(a: WaveState, b: WaveState) -> float:
    """Normalised squared overlap |<a|b>|^2 / (<a|a><b|b>) in [0, 1]."""
    overlap = inner_product(a, b)
    denom = inner_product(a, a).real * inner_product(b, b).real
    return (overlap.real**2 + overlap.imag**2) / denom


def distance(psi: WaveState, phi: WaveState) -> float:
    """State distance 1 - fidelity, clamped to [0, 1].

    Tiny negative rounding residues are clamped to zero so that
    logarithmic growth fits stay defined.
    """
    return min(max(1.0 - fidelity(psi, phi), 0.0), 1.0)


def fotoc(state: WaveState, epsilon: float) -> float:
    """Correlator |<psi|T(epsilon)|psi>|^2 built from the translation operator.

    Equals the fidelity between the state and its translate; epsilon = 0
    gives exactly 1.
    """
    if epsilon == 0.0:
        return 1.0
    return fidelity(state, translate(state, epsilon))


def edge_fraction(state: WaveState) -> float:
    """Probability mass in the outer 10% of momentum modes (|n| >= 0.45*N).

    A growing edge fraction means the wavepacket is about to outrun the
    spectral grid; comparisons against a threshold are the caller's job.
    """
    weights = np.abs(to_momentum(state)) ** 2
    modes = state.grid.momentum_indices
    edge = np.abs(modes) >= 0.45 * state.grid.n_points
    return float(np.sum(weights[edge]) / np.sum(weights))


def _clamp_unit(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def measure(
    state: WaveState,
    params: ModelParams,
    kick_index: int,
    *,
    distance: float | None = None,
    one_minus_fotoc: float | None = None,
    one_minus_le: float | None = None,
    terminated: str | None = None,
) -> ObservableRecord:
    """Assemble the standard record for one kick of a trajectory."""
    weights = np.abs(to_momentum(state)) ** 2
    total = float(np.sum(weights))
    p = params.hbar_eff * state.grid.momentum_indices.astype(np.float64)
    edge = np.abs(state.grid.momentum_indices) >= 0.45 * state.grid.n_points
    return ObservableRecord(
        kick_index=kick_index,
        log_norm=2.0 * state.log_amplitude,
        mean_p=float(np.sum(p * weights)) / total,
        mean_p2=float(np.sum(p * p * weights)) / total,
        edge_mass=float(np.sum(weights[edge])) / total,
        distance=distance,
        one_minus_fotoc=one_minus_fotoc,
        one_minus_le=one_minus_le,
        terminated=terminated,
    )
