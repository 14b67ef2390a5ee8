"""Wavefunctions on the circle grid and their spectral transforms.

A state stores unit-normalised samples together with a real log-amplitude
L; the physical wavefunction is exp(L) times the stored samples.  The
factoring keeps floats bounded while the non-Hermitian kick multiplies the
physical norm by huge factors, without changing the dynamics.

Momentum coefficients c_n are projections on exp(i*n*theta)/sqrt(2*pi),
so Parseval reads sum|c_n|^2 = sum|psi_j|^2 * dtheta.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .grid import SpatialGrid, TWO_PI

# Stored norm may drift only at rounding level; anything worse is a bug
# in the caller, not numerical noise.
NORM_TOLERANCE = 1e-9

# Periodic-image amplitude exp(-sigma*pi^2/2) above this triggers a warning.
_IMAGE_WARN_LEVEL = 1e-9


@dataclass(frozen=True)
class WaveState:
    """Unit-normalised complex samples plus a factored log-amplitude.

    The physical squared norm is exp(2*log_amplitude); stored amplitudes
    always satisfy sum|a_j|^2 * dtheta = 1 up to rounding.  Arrays are
    copied and frozen on construction, so states are immutable values.
    """

    grid: SpatialGrid
    amplitudes: np.ndarray
    log_amplitude: float = 0.0

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.grid.n_points,):
            raise ValueError(
                f"amplitudes must have shape ({self.grid.n_points},), got {amps.shape}"
            )
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise ValueError("amplitudes contain NaN or Inf")
        if not math.isfinite(self.log_amplitude):
            raise ValueError(f"log_amplitude must be finite, got {self.log_amplitude}")
        norm_sq = float(np.sum(amps.real**2 + amps.imag**2)) * self.grid.dtheta
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise ValueError(
                f"stored amplitudes must be unit-normalised, got |psi|^2 = {norm_sq!r}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "log_amplitude", float(self.log_amplitude))

    @classmethod
    def from_samples(cls, grid: SpatialGrid, values, log_amplitude: float = 0.0) -> "WaveState":
        """Normalise raw samples, folding their norm into the log-amplitude."""
        values = np.ascontiguousarray(values, dtype=np.complex128)
        if values.shape != (grid.n_points,):
            raise ValueError(
                f"samples must have shape ({grid.n_points},), got {values.shape}"
            )
        norm_sq = float(np.sum(values.real**2 + values.imag**2)) * grid.dtheta
        if not math.isfinite(norm_sq) or norm_sq <= 0.0:
            raise ValueError(f"samples have invalid norm {norm_sq!r}")
        return cls(grid, values / math.sqrt(norm_sq), log_amplitude + 0.5 * math.log(norm_sq))


def make_gaussian(grid: SpatialGrid, sigma: float, center: float = 0.0) -> WaveState:
    """Gaussian wavepacket (sigma/pi)^(1/4) * exp(-sigma*(theta-center)^2/2).

    The width parameter sigma scales the inverse variance; the packet must
    be narrow against the circle (1/sqrt(sigma) << pi) or periodic images
    distort it, in which case a warning is issued.  The returned state is
    exactly unit-normalised on the grid with log_amplitude = 0.
    """
    if not (isinstance(sigma, (int, float)) and math.isfinite(sigma) and sigma > 0):
        raise ValueError(f"sigma must be a positive finite number, got {sigma!r}")
    if not (isinstance(center, (int, float)) and math.isfinite(center)):
        raise ValueError(f"center must be a finite angle, got {center!r}")
    if math.exp(-sigma * math.pi**2 / 2.0) > _IMAGE_WARN_LEVEL:
        warnings.warn(
            f"Gaussian width 1/sqrt(sigma) = {1.0 / math.sqrt(sigma):.3g} is not small "
            "against pi; periodic images are not negligible",
            stacklevel=2,
        )
    delta = np.mod(grid.theta_values - center + math.pi, TWO_PI) - math.pi
    values = (sigma / math.pi) ** 0.25 * np.exp(-0.5 * sigma * delta**2)
    norm_sq = float(np.sum(values**2)) * grid.dtheta
    return WaveState(grid, values.astype(np.complex128) / math.sqrt(norm_sq), 0.0)


def to_momentum(state: WaveState) -> np.ndarray:
    """Momentum-representation coefficients, aligned with grid.momentum_indices."""
    grid = state.grid
    signs = grid._mode_signs
    return np.fft.fft(state.amplitudes) * (grid.dtheta / math.sqrt(TWO_PI) * signs)


def to_position(grid: SpatialGrid, coefficients, log_amplitude: float = 0.0) -> WaveState:
    """Rebuild a position-representation state from momentum coefficients."""
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    if coefficients.shape != (grid.n_points,):
        raise ValueError(
            f"coefficients must have shape ({grid.n_points},), got {coefficients.shape}"
        )
    samples = np.fft.ifft(coefficients * grid._mode_signs)
    samples *= grid.n_points / math.sqrt(TWO_PI)
    return WaveState.from_samples(grid, samples, log_amplitude)


def translate(state: WaveState, epsilon: float) -> WaveState:
    """Apply the spectral translation exp(-i*epsilon*p/hbar_eff).

    Diagonal in momentum space (c_n -> c_n * exp(-i*epsilon*n)), hence it
    shifts the wavefunction by epsilon without interpolation error, keeps
    the norm and log_amplitude exactly, and inverts under epsilon -> -epsilon.
    The shift need not be a multiple of the grid spacing.
    """
    if not math.isfinite(epsilon):
        raise ValueError(f"epsilon must be finite, got {epsilon!r}")
    grid = state.grid
    coeffs = to_momentum(state)
    coeffs *= np.exp(-1j * epsilon * grid.momentum_indices)
    samples = np.fft.ifft(coeffs * grid._mode_signs)
    samples *= grid.n_points / math.sqrt(TWO_PI)
    return WaveState(grid, samples, state.log_amplitude)


def inner_product(a: WaveState, b: WaveState) -> complex:
    """Discrete overlap sum(conj(a_j)*b_j)*dtheta of the stored amplitudes.

    Log-amplitudes are deliberately not folded in; callers needing the
    physical (unnormalised) overlap scale by exp(a.log_amplitude +
    b.log_amplitude) themselves.
    """
    if a.grid != b.grid:
        raise ValueError(
            f"states live on different grids ({a.grid.n_points} vs {b.grid.n_points} points)"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.grid.dtheta)
