"""Experiment orchestration and on-disk artifacts.

One run produces one CSV per trajectory plus a JSON summary; a sweep
produces one child directory per value and an aggregated parent summary.
Numeric CSV content is deterministic for a given build; the summary is
deterministic apart from the "timing" block.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .analysis import FitError, FitResult, fit_exponential, fit_growth_models, fit_superexponential
from .config import ExperimentConfig
from .evolution import Trajectory, evolve_trajectory
from .experiments import run_loschmidt_experiment, run_pair_experiment
from .grid import make_grid
from .state import make_gaussian

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "t", "log_norm", "mean_p", "mean_p2", "D",
    "one_minus_fotoc", "one_minus_le", "edge_mass",
)

# Which recorded series the growth fits target, per mode.
FIT_SERIES = {"distance": "distance", "loschmidt": "one_minus_le", "energy": "mean_p2"}


def _fmt(value: float | None) -> str:
    # 17 significant digits round-trips doubles exactly.
    return "" if value is None else format(value, ".17g")


def write_trajectory_csv(trajectory: Trajectory, path: Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for r in trajectory.records:
            writer.writerow([
                r.kick_index,
                _fmt(r.log_norm),
                _fmt(r.mean_p),
                _fmt(r.mean_p2),
                _fmt(r.distance),
                _fmt(r.one_minus_fotoc),
                _fmt(r.one_minus_le),
                _fmt(r.edge_mass),
            ])


def simulate_trajectory(config: ExperimentConfig) -> Trajectory:
    """Run the configured experiment once at the configured grid size.

    With escalate_grid_points set, a truncation stop triggers one rerun
    at the larger grid for extra momentum headroom; the escalated result
    replaces the first one.
    """
    trajectory = _simulate_at(config, config.grid_points)
    if trajectory.terminated == "truncation" and config.escalate_grid_points:
        trajectory = _simulate_at(config, config.escalate_grid_points)
    return trajectory


def _simulate_at(config: ExperimentConfig, n_points: int) -> Trajectory:
    grid = make_grid(n_points)
    initial = make_gaussian(grid, config.sigma, config.center)
    if config.mode == "distance":
        return run_pair_experiment(
            initial, config.params, config.epsilon, config.n_kicks, config.guards
        )
    if config.mode == "loschmidt":
        return run_loschmidt_experiment(
            initial, config.params, config.g_perturbation, config.n_kicks, config.guards
        )
    return evolve_trajectory(initial, config.params, config.n_kicks, config.guards)


def _fit_entry(result: FitResult | FitError) -> dict:
    if isinstance(result, FitResult):
        return result.to_dict()
    return {"error": str(result)}


def fit_trajectory(trajectory: Trajectory, config: ExperimentConfig) -> dict:
    """Growth fits for the mode's target series, honouring any fit request."""
    series_name = FIT_SERIES[config.mode]
    try:
        t, y = trajectory.series(series_name)
    except ValueError as err:
        return {"error": str(err)}
    exclude = trajectory.terminated_flags()[: len(t)]
    scale = config.scale
    if config.mode == "energy":
        # mean_p2 starts at its initial value rather than near zero; anchor
        # the double-log transform so the inner exponent starts at g.
        scale = float(y[0]) * math.exp(-config.params.g)
    g = abs(config.params.g) or 1.0

    if config.fit is not None and config.fit.window is not None:
        window = config.fit.window
        fits = {}
        for model in config.fit.models:
            try:
                if model == "exponential":
                    fits[model] = fit_exponential(t, y, window)
                else:
                    fits[model] = fit_superexponential(t, y, scale, window, g=g)
            except FitError as err:
                fits[model] = err
    else:
        fits = fit_growth_models(t, y, scale, g=g, exclude=exclude)
        if config.fit is not None:
            fits = {m: fits[m] for m in config.fit.models}
    return {model: _fit_entry(result) for model, result in fits.items()}


def run_labelled(label: str, config: ExperimentConfig, out_dir: Path) -> dict:
    """Execute one child run and write its artifacts; returns its summary entry."""
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    trajectory = simulate_trajectory(config)
    wall = time.perf_counter() - started
    csv_path = out_dir / "trajectory.csv"
    write_trajectory_csv(trajectory, csv_path)
    entry = {
        "label": label,
        "config": config.to_dict(),
        "csv": str(csv_path),
        "series": FIT_SERIES[config.mode],
        "scale": config.scale,
        "n_records": len(trajectory.records),
        "terminated": trajectory.terminated,
        "terminated_at": trajectory.terminated_at,
        "fits": fit_trajectory(trajectory, config),
        "timing": {"wall_time_s": wall},
    }
    (out_dir / "summary.json").write_text(json.dumps(_child_summary(entry), indent=2))
    return entry


def _child_summary(entry: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, **entry}


def _run_child(args) -> dict:
    label, config, out_dir = args
    return run_labelled(label, config, Path(out_dir))


def expand_sweep(config: ExperimentConfig) -> list[tuple[str, ExperimentConfig]]:
    if config.sweep is None:
        return [("run", config)]
    axis = config.sweep
    return [(f"{axis.param}={value:g}" if isinstance(value, float) else f"{axis.param}={value}",
             config.child(axis.param, value)) for value in axis.values]


def run(config: ExperimentConfig, out_dir) -> dict:
    """Run a single experiment or a sweep; returns the written summary."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    children = expand_sweep(config)
    started = time.perf_counter()
    if config.workers > 1 and len(children) > 1:
        jobs = [(label, child, str(out_dir / label)) for label, child in children]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            by_label = {e["label"]: e for e in pool.map(_run_child, jobs)}
        entries = [by_label[label] for label, _ in children]
    else:
        entries = [
            run_labelled(label, child, out_dir / label) for label, child in children
        ]
    wall = time.perf_counter() - started

    guard_events = [
        {"run": e["label"], "reason": e["terminated"], "kick": e["terminated_at"]}
        for e in entries
        if e["terminated"]
    ]
    summary = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "runs": entries,
        "guard_events": guard_events,
        "timing": {"wall_time_s": wall},
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2))
    return summary


def run_many(
    labelled: list[tuple[str, ExperimentConfig]], out_dir, workers: int = 1, meta: dict | None = None
) -> dict:
    """Run an explicit list of labelled configs (used by multi-axis presets)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    if workers > 1 and len(labelled) > 1:
        jobs = [(label, replace(cfg, workers=1), str(out_dir / label)) for label, cfg in labelled]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            by_label = {e["label"]: e for e in pool.map(_run_child, jobs)}
        entries = [by_label[label] for label, _ in labelled]
    else:
        entries = [run_labelled(label, cfg, out_dir / label) for label, cfg in labelled]
    wall = time.perf_counter() - started
    guard_events = [
        {"run": e["label"], "reason": e["terminated"], "kick": e["terminated_at"]}
        for e in entries
        if e["terminated"]
    ]
    summary = {
        "schema_version": SCHEMA_VERSION,
        "meta": meta or {},
        "runs": entries,
        "guard_events": guard_events,
        "timing": {"wall_time_s": wall},
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2))
    return summary


def read_trajectory_csv(path) -> dict[str, list]:
    """Parse a trajectory CSV back into column lists (None for blanks)."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != list(CSV_COLUMNS):
            raise ValueError(f"{path}: unexpected CSV header {header}")
        columns: dict[str, list] = {name: [] for name in CSV_COLUMNS}
        for row in reader:
            for name, cell in zip(CSV_COLUMNS, row):
                if name == "t":
                    columns[name].append(int(cell))
                else:
                    columns[name].append(float(cell) if cell != "" else None)
    return columns
