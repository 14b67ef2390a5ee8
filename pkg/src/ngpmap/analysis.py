"""Growth-law fitting and empirical diagnostics.

Two fit models cover the observed regimes: plain exponential growth
y ~ prefactor * exp(rate * t), fitted as a line on (t, ln y), and
double-exponential growth y ~ scale * exp[prefactor * exp(rate * t)],
fitted as a line on (t, ln[ln(y/scale)/g]).  Dividing by g inside the
double log makes the fitted slope directly comparable to eta/hbar_eff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as _dc_replace

import numpy as np

from .evolution import Trajectory, evolve_trajectory
from .grid import make_grid
from .state import make_gaussian

MIN_FIT_POINTS = 5


class FitError(ValueError):
    """Base class for fitting failures."""


class NonPositiveDataError(FitError):
    """Log transform impossible: some y <= 0 inside the fit window."""


class WindowTooSmallError(FitError):
    """Fewer than MIN_FIT_POINTS samples inside the fit window."""


class TransformDomainError(FitError):
    """Double-log transform undefined: some y <= scale inside the window."""


class NoValidWindowError(FitError):
    """No contiguous stretch of the series satisfies the window bounds."""


class UnresolvedThresholdError(FitError):
    """Norm-growth onset could not be bracketed by the probed values."""


@dataclass(frozen=True)
class FitResult:
    """A fitted growth model over a kick-index window.

    rate is per kick.  For the exponential model the fitted curve is
    prefactor * exp(rate*t); for the superexponential model it is
    scale * exp[prefactor * exp(rate*t)] with the scale supplied by the
    caller and echoed here.
    """

    model: str
    rate: float
    prefactor: float
    r_squared: float
    window: tuple[int, int]
    n_points: int
    scale: float | None = None

    def __post_init__(self):
        if self.model not in ("exponential", "superexponential"):
            raise ValueError(f"unknown model {self.model!r}")
        if not self.window[0] < self.window[1]:
            raise ValueError(f"window must satisfy t_start < t_end, got {self.window}")
        if self.n_points < MIN_FIT_POINTS:
            raise ValueError(f"n_points must be >= {MIN_FIT_POINTS}, got {self.n_points}")
        if not 0.0 <= self.r_squared <= 1.0:
            raise ValueError(f"r_squared must lie in [0, 1], got {self.r_squared}")

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "rate": self.rate,
            "prefactor": self.prefactor,
            "r_squared": self.r_squared,
            "window": [int(self.window[0]), int(self.window[1])],
            "n_points": self.n_points,
            "scale": self.scale,
        }


def _window_slice(t: np.ndarray, window: tuple[float, float] | None) -> np.ndarray:
    if window is None:
        return np.ones(len(t), dtype=bool)
    lo, hi = window
    if not lo < hi:
        raise ValueError(f"window must satisfy t_start < t_end, got {window}")
    return (t >= lo) & (t <= hi)


def _line_fit(t: np.ndarray, z: np.ndarray) -> tuple[float, float, float]:
    """Least-squares line z = slope*t + intercept and its r^2.

    A series with (numerically) zero variance is fit perfectly by the
    constant line, so r^2 = 1 there by convention.
    """
    slope, intercept = np.polyfit(t, z, 1)
    residuals = z - (slope * t + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((z - z.mean()) ** 2))
    if ss_tot <= 1e-30:
        r_squared = 1.0
    else:
        r_squared = max(0.0, 1.0 - ss_res / ss_tot)
    return float(slope), float(intercept), r_squared


def fit_exponential(t, y, window: tuple[float, float] | None = None) -> FitResult:
    """Fit y ~ prefactor * exp(rate * t) by least squares on (t, ln y)."""
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    keep = _window_slice(t, window)
    t, y = t[keep], y[keep]
    if len(t) < MIN_FIT_POINTS:
        raise WindowTooSmallError(
            f"need at least {MIN_FIT_POINTS} points in the window, got {len(t)}"
        )
    if np.any(y <= 0.0):
        raise NonPositiveDataError("exponential fit requires y > 0 inside the window")
    slope, intercept, r_squared = _line_fit(t, np.log(y))
    return FitResult(
        model="exponential",
        rate=slope,
        prefactor=math.exp(intercept),
        r_squared=r_squared,
        window=(int(t[0]), int(t[-1])),
        n_points=len(t),
    )


def fit_superexponential(
    t, y, scale: float, window: tuple[float, float] | None = None, g: float = 1.0
) -> FitResult:
    """Fit y ~ scale * exp[prefactor * exp(rate * t)].

    The double-log transform ln[ln(y/scale)/g] must be defined, i.e.
    y > scale throughout the window.  The reported prefactor g*exp(b)
    (b the fitted intercept) does not depend on the g used in the
    transform; g only anchors the intercept so the slope is directly
    comparable to the expected rate.
    """
    if not (scale > 0 and math.isfinite(scale)):
        raise ValueError(f"scale must be positive and finite, got {scale!r}")
    if not (g > 0 and math.isfinite(g)):
        raise ValueError(f"g must be positive and finite, got {g!r}")
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    keep = _window_slice(t, window)
    t, y = t[keep], y[keep]
    if len(t) < MIN_FIT_POINTS:
        raise WindowTooSmallError(
            f"need at least {MIN_FIT_POINTS} points in the window, got {len(t)}"
        )
    ratio = y / scale
    if np.any(ratio <= 1.0):
        raise TransformDomainError(
            "double-log transform undefined: need y > scale inside the window"
        )
    slope, intercept, r_squared = _line_fit(t, np.log(np.log(ratio) / g))
    return FitResult(
        model="superexponential",
        rate=slope,
        prefactor=g * math.exp(intercept),
        r_squared=r_squared,
        window=(int(t[0]), int(t[-1])),
        n_points=len(t),
        scale=scale,
    )


def select_fit_window(
    t,
    y,
    y_min: float,
    y_max: float,
    exclude=None,
    t_min: float = 0.0,
) -> tuple[int, int]:
    """Largest contiguous kick range with y in [y_min, y_max].

    Entries with exclude[i] True (guard-terminated records) and kicks
    before t_min never enter a window.  Ties go to the earliest range.
    """
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(t) == 0:
        raise NoValidWindowError("empty series")
    ok = (y >= y_min) & (y <= y_max) & (t >= t_min)
    if exclude is not None:
        ok &= ~np.asarray(exclude, dtype=bool)
    best_start = best_len = -1
    i = 0
    n = len(ok)
    while i < n:
        if ok[i]:
            j = i
            while j + 1 < n and ok[j + 1]:
                j += 1
            if j - i + 1 > best_len:
                best_start, best_len = i, j - i + 1
            i = j + 1
        else:
            i += 1
    if best_len < 2:
        raise NoValidWindowError(
            f"no contiguous run of >= 2 points with y in [{y_min:.3g}, {y_max:.3g}]"
        )
    return int(t[best_start]), int(t[best_start + best_len - 1])


# Distance-like series: the floor cuts double-precision noise relative to
# the small-shift scale, the ceiling stops before saturation at 1.
DISTANCE_WINDOW_FLOOR = 1e-8
DISTANCE_WINDOW_CEILING = 0.5
TRANSIENT_KICKS = 3


def default_growth_window(
    t, y, scale: float, exclude=None, skip_initial: int = TRANSIENT_KICKS
) -> tuple[int, int]:
    """Auto window for distance-like series: transient and saturation cut off."""
    return select_fit_window(
        t,
        y,
        y_min=DISTANCE_WINDOW_FLOOR * scale,
        y_max=DISTANCE_WINDOW_CEILING,
        exclude=exclude,
        t_min=skip_initial,
    )


def superexponential_window(
    t, y, scale: float, g: float = 1.0, exclude=None, skip_initial: int = TRANSIENT_KICKS
) -> tuple[int, int]:
    """Auto window restricted to where the double-exponential model applies.

    Starting from the default growth window, the left edge is advanced to
    the later of (a) the in-window minimum of y (the model is strictly
    increasing, so data before the post-transient minimum cannot follow
    it) and (b) the first point above scale*exp(g), the model's value at
    t = 0, below which the double-log transform sits under its baseline.
    """
    lo, hi = default_growth_window(t, y, scale, exclude=exclude, skip_initial=skip_initial)
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    inside = (t >= lo) & (t <= hi)
    tw, yw = t[inside], y[inside]
    start = int(np.argmin(yw))
    above = np.nonzero(yw > scale * math.exp(g))[0]
    if len(above) == 0:
        raise NoValidWindowError(
            f"series never exceeds the model baseline scale*e^g = {scale * math.exp(g):.3g}"
        )
    start = max(start, int(above[0]))
    if len(tw) - start < 2:
        raise NoValidWindowError("too little data above the model baseline")
    return int(tw[start]), int(tw[-1])


def fit_growth_models(t, y, scale: float, g: float = 1.0, exclude=None) -> dict:
    """Fit both growth models, each on its own auto-selected window.

    The exponential model uses the default growth window; the
    superexponential model uses the window trimmed to its domain.
    Returns {"exponential": FitResult | FitError, "superexponential": ...};
    failures are returned, not raised, so callers can report partial results.
    """
    out: dict = {}
    try:
        out["exponential"] = fit_exponential(t, y, default_growth_window(t, y, scale, exclude=exclude))
    except FitError as err:
        out["exponential"] = err
    try:
        window = superexponential_window(t, y, scale, g=g, exclude=exclude)
        out["superexponential"] = fit_superexponential(t, y, scale, window, g=g)
    except FitError as err:
        out["superexponential"] = err
    return out


def norm_growth_slope(trajectory: Trajectory, late_fraction: float = 0.5) -> float:
    """Least-squares slope of log-norm over the late part of a trajectory.

    Guard-flagged records are dropped; the fit uses the trailing
    late_fraction of what remains (at least two points).
    """
    t, log_norm = trajectory.series("log_norm")
    ok = ~trajectory.terminated_flags()
    t, log_norm = t[ok], log_norm[ok]
    if len(t) < 2:
        raise WindowTooSmallError("trajectory too short for a norm-growth slope")
    start = min(int(math.floor(len(t) * (1.0 - late_fraction))), len(t) - 2)
    slope, _, _ = _line_fit(t[start:], log_norm[start:])
    return slope


def estimate_eta_c(
    base,
    eta_values,
    slope_threshold: float = 1e-3,
    resolution: float | None = None,
) -> float:
    """Smallest probed eta whose late-time log-norm slope exceeds the threshold.

    base is an ExperimentConfig template; its eta is replaced by each probe
    value.  With a resolution, the bracket between the largest quiet and the
    smallest growing value is refined by bisection to that width.  Raises
    UnresolvedThresholdError when every probe grows or none does.
    """
    eta_values = [float(v) for v in eta_values]
    if len(eta_values) < 3:
        raise ValueError("need at least 3 eta values")
    if sorted(eta_values) != eta_values:
        raise ValueError("eta_values must be sorted ascending")

    def slope_for(eta: float) -> float:
        grid = make_grid(base.grid_points)
        initial = make_gaussian(grid, base.sigma, base.center)
        params = _dc_replace(base.params, eta=eta)
        trajectory = evolve_trajectory(initial, params, base.n_kicks, base.guards)
        return norm_growth_slope(trajectory)

    slopes = [slope_for(eta) for eta in eta_values]
    growing = [s > slope_threshold for s in slopes]
    if all(growing):
        raise UnresolvedThresholdError(
            f"all probed eta values grow faster than {slope_threshold:g} per kick"
        )
    if not any(growing):
        raise UnresolvedThresholdError(
            f"no probed eta value grows faster than {slope_threshold:g} per kick"
        )
    hi = eta_values[growing.index(True)]
    quiet_below = [v for v, grow in zip(eta_values, growing) if not grow and v < hi]
    if resolution is not None and quiet_below:
        lo = max(quiet_below)
        while hi - lo > resolution:
            mid = 0.5 * (lo + hi)
            if slope_for(mid) > slope_threshold:
                hi = mid
            else:
                lo = mid
    return hi


def energy_step_diagnostic(trajectory: Trajectory) -> np.ndarray:
    """Measured over predicted mean-square momentum, one ratio per kick step.

    The prediction applies the iterative increment V -> V * (1 + g_t^2)
    with the amplitude-scaled strength g_t = g * exp(log_norm).  The
    relation is approximate; treat the ratios as an order-of-magnitude
    diagnostic, not a fit target.
    """
    records = [r for r in trajectory.records if r.terminated is None]
    if len(records) < 2:
        raise ValueError("need at least two untruncated records")
    v = np.asarray([r.mean_p2 for r in records])
    log_norm = np.asarray([r.log_norm for r in records])
    g_t = trajectory.params.g * np.exp(log_norm[:-1])
    predicted = v[:-1] * (1.0 + g_t**2)
    return v[1:] / predicted
