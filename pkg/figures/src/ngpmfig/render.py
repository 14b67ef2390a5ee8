"""Panel rendering: growth curves with fitted-law overlays and
rate-versus-parameter panels.

Rendering never mutates its inputs, and identical inputs produce
identical image bytes (for vector formats, up to embedded metadata;
the date field is stripped and the SVG hash salt pinned so in practice
the bytes repeat).  Points a log or double-log axis cannot show are
never dropped silently: every render returns the per-file counts and
prints them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .data import DataError, RatePoint, TrajectorySeries, load_rate_points, load_series

FORMATS = ("png", "svg", "pdf")
PANELS = ("growth_curves", "rate_vs_eta", "rate_vs_hbar")
YSCALES = ("log", "double-log", "linear")

# Marker order mirrors the reference figures: squares, circles, diamonds,
# pentagrams, triangles.  Cosmetic only.
MARKERS = ("s", "o", "D", "p", "^")

plt.rcParams["svg.hashsalt"] = "ngpmfig"


@dataclass
class FigureSpec:
    """Everything one render needs; validated on construction."""

    panel: str
    out: str
    csvs: tuple = ()
    summary: str | None = None
    column: str = "auto"
    yscale: str = "log"
    overlay: bool = True
    scale: float | None = None

    def __post_init__(self):
        if self.panel not in PANELS:
            raise DataError(f"panel must be one of {PANELS}, got {self.panel!r}")
        if self.format not in FORMATS:
            raise DataError(
                f"output format must be one of {FORMATS}, got {Path(self.out).suffix!r}"
            )
        if self.yscale not in YSCALES:
            raise DataError(f"yscale must be one of {YSCALES}, got {self.yscale!r}")
        if self.panel == "growth_curves" and not self.csvs:
            raise DataError("growth_curves needs at least one trajectory CSV")
        if self.panel != "growth_curves" and self.summary is None:
            raise DataError(f"{self.panel} needs a summary JSON (--summary)")

    @property
    def format(self) -> str:
        return Path(self.out).suffix.lstrip(".").lower()


@dataclass
class RenderReport:
    """What a render did: where the image went, what could not be drawn."""

    out: Path
    n_series: int
    dropped_points: dict[str, int] = field(default_factory=dict)

    def announce(self):
        for name, count in self.dropped_points.items():
            print(f"dropped {count} point(s) from {name} (not representable on this axis)")
        print(f"wrote {self.out}")


def _save(fig, spec: FigureSpec) -> Path:
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format=spec.format, metadata={"Date": None} if spec.format != "png" else None)
    plt.close(fig)
    return out


def _fit_curve(fit: dict, t: np.ndarray) -> np.ndarray:
    if fit["model"] == "exponential":
        return fit["prefactor"] * np.exp(fit["rate"] * t)
    return fit["scale"] * np.exp(fit["prefactor"] * np.exp(fit["rate"] * t))


def _best_fit(series: TrajectorySeries) -> dict | None:
    fits = [f for f in series.fits.values() if f.get("scale") is None or f["scale"] > 0]
    if not fits:
        return None
    return max(fits, key=lambda f: f["r_squared"])


def _double_log(y: float, scale: float) -> float | None:
    ratio = y / scale
    if ratio <= 1.0:
        return None
    return math.log(math.log(ratio))


def render_growth_figure(spec: FigureSpec) -> RenderReport:
    """One panel of growth curves, one marker series per input CSV.

    With ``yscale="log"`` the raw series is drawn on a log axis; with
    ``"double-log"`` the transform ln(ln(y/scale)) is drawn on a linear
    axis, which turns a double-exponential law into a straight line.
    Fitted growth laws from the summary are overlaid as solid lines over
    their fit windows.
    """
    summary = None
    if spec.summary is not None:
        from .data import read_summary

        summary = read_summary(spec.summary)
    all_series = load_series(spec.csvs, summary, spec.column)

    fig, ax = plt.subplots(figsize=(6.0, 4.2), constrained_layout=True)
    dropped: dict[str, int] = {}
    for index, series in enumerate(all_series):
        marker = MARKERS[index % len(MARKERS)]
        points = series.points()
        scale = spec.scale or series.scale
        if spec.yscale == "double-log":
            if not scale:
                raise DataError(
                    f"{series.path}: double-log axis needs a scale "
                    "(none in the summary; pass one explicitly)"
                )
            shown = [(t, _double_log(y, scale)) for t, y in points]
        elif spec.yscale == "log":
            shown = [(t, y if y > 0 else None) for t, y in points]
        else:
            shown = points
        lost = sum(1 for _, y in shown if y is None)
        if lost:
            dropped[str(series.path)] = lost
        kept = [(t, y) for t, y in shown if y is not None]
        if not kept:
            raise DataError(f"{series.path}: no representable points on a {spec.yscale} axis")
        t_vals, y_vals = zip(*kept)
        ax.plot(t_vals, y_vals, marker, ms=4, ls="none", label=series.label)

        fit = _best_fit(series) if spec.overlay else None
        if fit is not None:
            lo, hi = fit["window"]
            tt = np.linspace(lo, hi, 200)
            curve = _fit_curve(fit, tt)
            if spec.yscale == "double-log":
                curve = np.array([_double_log(v, scale) or np.nan for v in curve])
            ax.plot(tt, curve, "-", lw=1.2, color=ax.lines[-1].get_color())

    if spec.yscale == "log":
        ax.set_yscale("log")
    ax.set_xlabel("kick number t")
    labels = {"log": "y", "linear": "y", "double-log": "ln ln(y/scale)"}
    column = all_series[0].column
    ax.set_ylabel(f"{labels[spec.yscale]}  [{column}]")
    ax.legend(fontsize=8)
    out = _save(fig, spec)
    report = RenderReport(out=out, n_series=len(all_series), dropped_points=dropped)
    report.announce()
    return report


def render_rate_figure(spec: FigureSpec) -> RenderReport:
    """Fitted rates against eta or hbar, grouped by the other parameter.

    Draws the predicted proportionality (rate = eta/hbar as a
    through-origin line against eta, or an inverse curve against hbar)
    and, with overlay on, a least-squares version of the same shape
    through the measured points.
    """
    from .data import read_summary

    summary = read_summary(spec.summary)
    points = load_rate_points(summary)
    against_eta = spec.panel == "rate_vs_eta"
    x_of = (lambda p: p.eta) if against_eta else (lambda p: p.hbar)
    group_of = (lambda p: p.hbar) if against_eta else (lambda p: p.eta)
    points = [p for p in points if p.eta > 0]
    if len(points) < 2:
        raise DataError(
            f"{spec.summary}: need at least 2 fitted rates along "
            f"{'eta' if against_eta else 'hbar'}, found {len(points)}"
        )

    groups: dict[float, list[RatePoint]] = {}
    for p in points:
        groups.setdefault(group_of(p), []).append(p)

    fig, ax = plt.subplots(figsize=(5.2, 4.0), constrained_layout=True)
    group_name = "hbar" if against_eta else "eta"
    for index, key in enumerate(sorted(groups)):
        bunch = sorted(groups[key], key=x_of)
        xs = np.array([x_of(p) for p in bunch])
        ys = np.array([p.rate for p in bunch])
        marker = MARKERS[index % len(MARKERS)]
        ax.plot(xs, ys, marker, ms=6, ls="none", label=f"{group_name}={key:g}")
        color = ax.lines[-1].get_color()

        grid = np.linspace(min(xs), max(xs), 100)
        if against_eta:
            predicted = grid / key
            ax.plot(np.concatenate([[0.0], grid]), np.concatenate([[0.0], predicted]),
                    "--", lw=0.9, color=color)
        else:
            predicted = key / grid
            ax.plot(grid, predicted, "--", lw=0.9, color=color)
        if spec.overlay:
            # least-squares coefficient for the same functional shape
            basis = xs / key if against_eta else key / xs
            coeff = float(np.sum(ys * basis) / np.sum(basis**2))
            ax.plot(grid, coeff * (grid / key if against_eta else key / grid),
                    "-", lw=1.2, color=color)

    ax.set_xlabel("eta" if against_eta else "hbar_eff")
    ax.set_ylabel("growth rate")
    ax.set_xlim(left=0 if against_eta else None)
    ax.set_ylim(bottom=0)
    ax.legend(fontsize=8)
    out = _save(fig, spec)
    report = RenderReport(out=out, n_series=len(groups))
    report.announce()
    return report


def render(spec: FigureSpec) -> RenderReport:
    if spec.panel == "growth_curves":
        return render_growth_figure(spec)
    return render_rate_figure(spec)
