"""Uniform discretisation of the angle circle and the model parameters.

Positions live on theta_j = -pi + j*dtheta with dtheta = 2*pi/N, so a
symmetric wavepacket centred at theta = 0 sits exactly on the grid's
reflection axis.  The conjugate momentum is quantised as p_n = hbar_eff*n
for integer n in {-N/2, ..., N/2-1}; mode indices are stored in FFT layout
(0, 1, ..., N/2-1, -N/2, ..., -1) so they align with transform output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ModelParams:
    """Kick strengths and the effective Planck constant.

    g is the real part of the nonlinear kick, eta >= 0 the imaginary
    (amplifying) part, and hbar_eff > 0 sets the momentum quantisation
    p_n = hbar_eff * n together with every phase factor in the map.
    """

    g: float
    eta: float = 0.0
    hbar_eff: float = 1.0

    def __post_init__(self):
        for name in ("g", "eta", "hbar_eff"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite real number, got {value!r}")
        if self.hbar_eff <= 0.0:
            raise ValueError(f"hbar_eff must be positive, got {self.hbar_eff}")
        if self.eta < 0.0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")


@dataclass(frozen=True, eq=False)
class SpatialGrid:
    """N-point discretisation of the circle [-pi, pi).

    N must be a power of two (>= 8) so transforms are fast and the mode
    indexing is unambiguous.  Derived arrays are read-only; grids are
    immutable values safe to share between threads.
    """

    n_points: int
    theta_values: np.ndarray = field(init=False, repr=False, compare=False)
    momentum_indices: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ValueError(f"n_points must be an integer, got {n!r}")
        n = int(n)
        if n < 8 or not _is_power_of_two(n):
            raise ValueError(f"n_points must be a power of two >= 8, got {n}")
        object.__setattr__(self, "n_points", n)

        theta = -math.pi + self.dtheta * np.arange(n)
        modes = np.concatenate(
            [np.arange(0, n // 2), np.arange(-n // 2, 0)]
        ).astype(np.int64)
        # (-1)^n factors translate between FFT bins (theta origin at 0)
        # and true mode projections on the [-pi, pi) grid.
        signs = np.where(modes % 2 == 0, 1.0, -1.0)
        for arr in (theta, modes, signs):
            arr.setflags(write=False)
        object.__setattr__(self, "theta_values", theta)
        object.__setattr__(self, "momentum_indices", modes)
        object.__setattr__(self, "_mode_signs", signs)

    @property
    def dtheta(self) -> float:
        return TWO_PI / self.n_points

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpatialGrid):
            return NotImplemented
        return self.n_points == other.n_points

    def __hash__(self) -> int:
        return hash(("SpatialGrid", self.n_points))

    def __repr__(self) -> str:
        return f"SpatialGrid(n_points={self.n_points})"


def make_grid(n_points: int) -> SpatialGrid:
    """Build the circle grid; rejects sizes that are not powers of two >= 8."""
    return SpatialGrid(n_points)
