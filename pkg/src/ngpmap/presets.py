"""Canned experiment sets reproducing the reference growth figures.

fig1a: distance/correlator growth curves across eta at hbar_eff = 1.
fig1b: growth rate versus eta for several hbar_eff values.
fig1c: growth rate versus hbar_eff for several eta values.
fig2:  echo decay curves across eta under a small kick-strength change.

Kick counts are chosen so the auto fit windows are well populated; the
guards stop each run once the spectral grid saturates, and the growth
figures escalate the grid once for extra headroom.
"""

from __future__ import annotations

from .config import ExperimentConfig, SweepAxis
from .grid import ModelParams

FIG_ETA_VALUES = (0.0, 0.01, 0.02, 0.03, 0.05)
FIG_HBAR_VALUES = (0.2, 0.3, 0.5, 1.0)


def fig1a() -> ExperimentConfig:
    return ExperimentConfig(
        params=ModelParams(g=1.0, eta=0.0, hbar_eff=1.0),
        mode="distance",
        n_kicks=180,
        epsilon=1e-5,
        sweep=SweepAxis(param="eta", values=FIG_ETA_VALUES),
        escalate_grid_points=65536,
    )


def fig2() -> ExperimentConfig:
    return ExperimentConfig(
        params=ModelParams(g=1.0, eta=0.0, hbar_eff=1.0),
        mode="loschmidt",
        n_kicks=180,
        g_perturbation=1e-5,
        sweep=SweepAxis(param="eta", values=FIG_ETA_VALUES),
        escalate_grid_points=65536,
    )


def _rate_grid(eta_values, hbar_values) -> list[tuple[str, ExperimentConfig]]:
    runs = []
    for hbar in hbar_values:
        for eta in eta_values:
            config = ExperimentConfig(
                params=ModelParams(g=1.0, eta=eta, hbar_eff=hbar),
                mode="distance",
                n_kicks=150,
                epsilon=1e-5,
            )
            runs.append((f"hbar={hbar:g}_eta={eta:g}", config))
    return runs


def fig1b() -> list[tuple[str, ExperimentConfig]]:
    return _rate_grid(eta_values=(0.01, 0.02, 0.03, 0.05), hbar_values=FIG_HBAR_VALUES)


def fig1c() -> list[tuple[str, ExperimentConfig]]:
    return _rate_grid(eta_values=(0.02, 0.03, 0.05), hbar_values=FIG_HBAR_VALUES)


PRESETS = {
    "fig1a": fig1a,
    "fig1b": fig1b,
    "fig1c": fig1c,
    "fig2": fig2,
}

# Axis metadata consumed by figure tooling.
PRESET_META = {
    "fig1a": {"panel": "growth_curves", "x": "t", "series": "distance"},
    "fig1b": {"panel": "rate_vs_eta", "x": "eta", "group": "hbar"},
    "fig1c": {"panel": "rate_vs_hbar", "x": "hbar", "group": "eta"},
    "fig2": {"panel": "growth_curves", "x": "t", "series": "one_minus_le"},
}
