"""Readers for the simulator's on-disk artifacts.

This package talks to the simulator only through its documented file
schemas: the trajectory CSV (header
``t,log_norm,mean_p,mean_p2,D,one_minus_fotoc,one_minus_le,edge_mass``,
empty cells for unmeasured columns) and the run summary JSON
(``schema_version``, ``runs`` entries with config echo, fits, scale).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

CSV_COLUMNS = (
    "t", "log_norm", "mean_p", "mean_p2", "D",
    "one_minus_fotoc", "one_minus_le", "edge_mass",
)

# Preferred y columns for growth panels, first populated one wins.
GROWTH_COLUMNS = ("D", "one_minus_le", "mean_p2")


class DataError(ValueError):
    """Bad or unusable input artifact; message names the file."""


@dataclass
class TrajectorySeries:
    """One CSV turned into a plottable (t, y) series."""

    path: Path
    label: str
    column: str
    t: list[int]
    y: list[float | None]
    scale: float | None = None
    fits: dict = field(default_factory=dict)

    def points(self) -> list[tuple[int, float]]:
        return [(t, y) for t, y in zip(self.t, self.y) if y is not None]


def read_trajectory(path) -> dict[str, list]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: no such file")
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise DataError(f"{path}: empty CSV")
    header, body = rows[0], rows[1:]
    if header != list(CSV_COLUMNS):
        missing = set(CSV_COLUMNS) - set(header)
        raise DataError(
            f"{path}: unexpected CSV header (missing columns: {sorted(missing) or header})"
        )
    if not body:
        raise DataError(f"{path}: CSV has a header but no data rows")
    columns: dict[str, list] = {name: [] for name in CSV_COLUMNS}
    for row in body:
        for name, cell in zip(CSV_COLUMNS, row):
            if name == "t":
                columns[name].append(int(cell))
            else:
                columns[name].append(float(cell) if cell != "" else None)
    return columns


def pick_growth_column(columns: dict[str, list], path) -> str:
    for name in GROWTH_COLUMNS:
        if any(v is not None for v in columns[name]):
            return name
    raise DataError(f"{path}: no populated growth column among {GROWTH_COLUMNS}")


def read_summary(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: no such file")
    try:
        summary = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise DataError(f"{path}: not valid JSON ({err})") from err
    if "runs" not in summary:
        raise DataError(f"{path}: summary JSON has no 'runs' list")
    return summary


def _entry_for(summary: dict | None, csv_path: Path) -> dict | None:
    if summary is None:
        return None
    target = csv_path.resolve()
    for entry in summary["runs"]:
        recorded = Path(entry.get("csv", ""))
        if recorded.resolve() == target or recorded.name == csv_path.name and (
            recorded.parent.name == csv_path.parent.name
        ):
            return entry
    return None


def load_series(
    csv_paths, summary: dict | None = None, column: str = "auto"
) -> list[TrajectorySeries]:
    """Read CSVs into labelled series, attaching summary fits when they match.

    Labels come from the matching summary entry, else from the parent
    directory name (the runner names child directories ``param=value``),
    else from the file stem.
    """
    series = []
    for raw_path in csv_paths:
        path = Path(raw_path)
        columns = read_trajectory(path)
        use_column = pick_growth_column(columns, path) if column == "auto" else column
        if use_column not in columns:
            raise DataError(f"{path}: unknown column {use_column!r}")
        if all(v is None for v in columns[use_column]):
            raise DataError(f"{path}: column {use_column!r} is empty")
        entry = _entry_for(summary, path)
        if entry is not None:
            label = entry["label"]
            scale = entry.get("scale")
            fits = {
                model: fit
                for model, fit in entry.get("fits", {}).items()
                if isinstance(fit, dict) and "rate" in fit
            }
        else:
            label = path.parent.name if "=" in path.parent.name else path.stem
            scale, fits = None, {}
        series.append(
            TrajectorySeries(
                path=path, label=label, column=use_column,
                t=columns["t"], y=columns[use_column], scale=scale, fits=fits,
            )
        )
    return series


@dataclass
class RatePoint:
    """One fitted growth rate with the parameters it was measured at."""

    label: str
    eta: float
    hbar: float
    rate: float
    r_squared: float


def load_rate_points(summary: dict, model: str = "superexponential") -> list[RatePoint]:
    points = []
    for entry in summary["runs"]:
        fit = entry.get("fits", {}).get(model)
        if not (isinstance(fit, dict) and "rate" in fit):
            continue
        config = entry.get("config", {})
        points.append(
            RatePoint(
                label=entry["label"],
                eta=float(config.get("eta", 0.0)),
                hbar=float(config.get("hbar", 1.0)),
                rate=float(fit["rate"]),
                r_squared=float(fit["r_squared"]),
            )
        )
    return points
