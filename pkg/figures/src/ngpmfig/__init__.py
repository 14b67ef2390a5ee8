"""Figure rendering for kicked-map trajectory artifacts (CSV + summary JSON)."""

from .data import DataError, RatePoint, TrajectorySeries, load_rate_points, load_series, read_summary, read_trajectory
from .render import FigureSpec, RenderReport, render, render_growth_figure, render_rate_figure

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "FigureSpec",
    "RatePoint",
    "RenderReport",
    "TrajectorySeries",
    "load_rate_points",
    "load_series",
    "read_summary",
    "read_trajectory",
    "render",
    "render_growth_figure",
    "render_rate_figure",
]
