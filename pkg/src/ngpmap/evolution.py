"""One-period map: amplifying nonlinear kick followed by free rotation.

The kick multiplies the physical wavefunction pointwise by
exp[(eta - i*g) * rho(theta) / hbar_eff] with rho the physical density
exp(2L)*|psi_hat|^2, evaluated before the kick; the free factor is the
diagonal momentum phase exp(-i * hbar_eff * n^2 / 2).  Both factors are
closed-form, so the only numerical error in one period is rounding.

Norm gained in the kick is folded into the log-amplitude via a shifted
exponential (log-sum-exp), keeping the stored samples unit-normalised
until the log-amplitude itself would overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from .grid import ModelParams
from .observables import ObservableRecord, edge_fraction, measure
from .state import WaveState

# Physical densities with log beyond this are not representable in doubles.
_DENSITY_LOG_LIMIT = 700.0


class GuardError(RuntimeError):
    """A trajectory guard tripped; the run must stop at this kick."""


class NormOverflowError(GuardError):
    """Log-amplitude exceeded its bound (or the density left double range)."""


class TruncationError(GuardError):
    """Momentum mass reached the grid edge; results past here alias."""

    def __init__(self, message: str, state: WaveState, edge_mass: float):
        super().__init__(message)
        self.state = state
        self.edge_mass = edge_mass


@dataclass(frozen=True)
class EvolutionGuards:
    """Stop-and-flag thresholds for a running trajectory.

    edge_fraction_max bounds the probability in the outer 10% of momentum
    modes (aliasing silently corrupts <p^2> once the packet reaches the
    edge); max_log_amplitude bounds the factored log-amplitude L.
    """

    edge_fraction_max: float = 1e-8
    max_log_amplitude: float = 300.0

    def __post_init__(self):
        for name in ("edge_fraction_max", "max_log_amplitude"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


DEFAULT_GUARDS = EvolutionGuards()


@dataclass(frozen=True)
class Trajectory:
    """Result of iterating the map: one record per kick index 0..n.

    terminated/terminated_at flag an early guard stop; partner_state is
    filled by the two-state experiments.
    """

    params: ModelParams
    guards: EvolutionGuards
    records: tuple[ObservableRecord, ...]
    final_state: WaveState
    partner_state: WaveState | None = None
    terminated: str | None = None
    terminated_at: int | None = None

    def __post_init__(self):
        indices = [r.kick_index for r in self.records]
        if indices != list(range(len(indices))):
            raise ValueError(f"kick indices must run 0,1,2,... got {indices[:5]}...")

    @property
    def n_kicks(self) -> int:
        return len(self.records) - 1

    def series(self, field: str) -> tuple[np.ndarray, np.ndarray]:
        """(t, y) arrays for one record field, skipping unmeasured entries."""
        pairs = [
            (r.kick_index, getattr(r, field))
            for r in self.records
            if getattr(r, field) is not None
        ]
        if not pairs:
            raise ValueError(f"no records carry the field {field!r}")
        t, y = zip(*pairs)
        return np.asarray(t, dtype=np.float64), np.asarray(y, dtype=np.float64)

    def terminated_flags(self) -> np.ndarray:
        return np.asarray([r.terminated is not None for r in self.records])


@lru_cache(maxsize=64)
def _free_phases(n_points: int, hbar_eff: float) -> np.ndarray:
    modes = np.concatenate([np.arange(0, n_points // 2), np.arange(-n_points // 2, 0)])
    phases = np.exp(-0.5j * hbar_eff * modes.astype(np.float64) ** 2)
    phases.setflags(write=False)
    return phases


def apply_kick(
    state: WaveState, params: ModelParams, guards: EvolutionGuards = DEFAULT_GUARDS
) -> WaveState:
    """Multiply by exp[(eta - i*g) * rho / hbar_eff] with rho the physical density.

    The gained norm is folded into the log-amplitude; stored samples come
    back unit-normalised.  With eta = 0 the factor is a pure phase and the
    physical norm is untouched.  Raises NormOverflowError when the updated
    log-amplitude would exceed guards.max_log_amplitude.
    """
    amps = state.amplitudes
    dens_hat = amps.real**2 + amps.imag**2
    log_scale = 2.0 * state.log_amplitude
    peak = float(dens_hat.max())
    if log_scale + math.log(peak) > _DENSITY_LOG_LIMIT:
        raise NormOverflowError(
            f"physical density exceeds double range (log_amplitude={state.log_amplitude:.3g})"
        )
    rho = math.exp(log_scale) * dens_hat

    inv_hbar = 1.0 / params.hbar_eff
    phase = (params.g * inv_hbar) * rho
    if params.eta == 0.0:
        new_amps = amps * np.exp(-1j * phase)
        gain_shift = 0.0
    else:
        gain = (params.eta * inv_hbar) * rho
        gain_shift = float(gain.max())
        new_amps = amps * np.exp((gain - gain_shift) - 1j * phase)

    norm_sq = float(np.sum(new_amps.real**2 + new_amps.imag**2)) * state.grid.dtheta
    new_log = state.log_amplitude + gain_shift + 0.5 * math.log(norm_sq)
    if not math.isfinite(new_log) or new_log > guards.max_log_amplitude:
        raise NormOverflowError(
            f"log_amplitude {new_log:.6g} exceeds bound {guards.max_log_amplitude:.6g}"
        )
    return WaveState(state.grid, new_amps / math.sqrt(norm_sq), new_log)


def apply_free(state: WaveState, params: ModelParams) -> WaveState:
    """Free rotation exp(-i*p^2/(2*hbar_eff)): diagonal phases in momentum space."""
    grid = state.grid
    coeffs = np.fft.fft(state.amplitudes)
    coeffs *= _free_phases(grid.n_points, params.hbar_eff)
    samples = np.fft.ifft(coeffs)
    return WaveState(grid, samples, state.log_amplitude)


def check_truncation(state: WaveState, guards: EvolutionGuards = DEFAULT_GUARDS) -> float:
    """Edge-mass fraction in the outer 10% of momentum modes (|n| >= 0.45*N).

    Pure measurement; comparing against guards.edge_fraction_max is the
    caller's job (floquet_step does it after every period).
    """
    return edge_fraction(state)


def floquet_step(
    state: WaveState, params: ModelParams, guards: EvolutionGuards = DEFAULT_GUARDS
) -> WaveState:
    """One full period: kick, then free rotation, then the truncation check."""
    stepped = apply_free(apply_kick(state, params, guards), params)
    edge = check_truncation(stepped, guards)
    if edge > guards.edge_fraction_max:
        raise TruncationError(
            f"edge mass {edge:.3e} exceeds {guards.edge_fraction_max:.3e}", stepped, edge
        )
    return stepped


Observer = Callable[[WaveState], dict]


def evolve_trajectory(
    initial: WaveState,
    params: ModelParams,
    n_kicks: int,
    guards: EvolutionGuards = DEFAULT_GUARDS,
    observers: Iterable[Observer] = (),
) -> Trajectory:
    """Iterate the map n_kicks times, recording observables at every kick.

    Records are taken at t = 0 and after each kick.  Guard errors do not
    propagate: a truncation stop appends a final flagged record, an
    overflow stop flags the last completed one, and the trajectory is
    returned with the termination reason either way.  Extra observers may
    fill the optional record fields (e.g. one_minus_fotoc) from the state.
    """
    if n_kicks < 0:
        raise ValueError(f"n_kicks must be >= 0, got {n_kicks}")
    observers = tuple(observers)

    def record(state: WaveState, kick: int, terminated: str | None = None) -> ObservableRecord:
        extras: dict = {}
        for observer in observers:
            extras.update(observer(state))
        return measure(state, params, kick, terminated=terminated, **extras)

    records = [record(initial, 0)]
    state = initial
    for kick in range(1, n_kicks + 1):
        try:
            state = floquet_step(state, params, guards)
        except TruncationError as err:
            records.append(record(err.state, kick, terminated="truncation"))
            return Trajectory(
                params, guards, tuple(records), err.state,
                terminated="truncation", terminated_at=kick,
            )
        except NormOverflowError:
            records[-1] = replace(records[-1], terminated="overflow")
            return Trajectory(
                params, guards, tuple(records), state,
                terminated="overflow", terminated_at=kick,
            )
        records.append(record(state, kick))
    return Trajectory(params, guards, tuple(records), state)
