"""Experiment configuration: JSON schema, defaults, validation, overrides.

A config file is a single JSON object; unknown keys are rejected so typos
fail loudly.  Command-line overrides (``key=value`` with dotted paths for
nested keys) are merged onto the file content before validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .evolution import EvolutionGuards
from .grid import ModelParams

MODES = ("distance", "loschmidt", "energy")
SWEEP_PARAMS = ("eta", "g", "hbar", "epsilon", "sigma", "grid_points", "n_kicks")

DEFAULT_GRID_POINTS = 8192
DEFAULT_SIGMA = 10.0
DEFAULT_EPSILON = 1e-5
DEFAULT_G_PERTURBATION = 1e-5


class ConfigError(ValueError):
    """Invalid configuration; the message lists the offending fields."""


@dataclass(frozen=True)
class SweepAxis:
    param: str
    values: tuple

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise ConfigError(
                f"sweep.param must be one of {SWEEP_PARAMS}, got {self.param!r}"
            )
        if len(self.values) < 1:
            raise ConfigError("sweep.values must be a nonempty list")


@dataclass(frozen=True)
class FitRequest:
    models: tuple = ("exponential", "superexponential")
    window: tuple | None = None

    def __post_init__(self):
        for model in self.models:
            if model not in ("exponential", "superexponential"):
                raise ConfigError(f"fit.models entries must name a model, got {model!r}")
        if self.window is not None and not (
            len(self.window) == 2 and self.window[0] < self.window[1]
        ):
            raise ConfigError(f"fit.window must be [t_start, t_end], got {self.window}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved description of one experiment (or one sweep of them)."""

    params: ModelParams
    mode: str
    n_kicks: int
    grid_points: int = DEFAULT_GRID_POINTS
    sigma: float = DEFAULT_SIGMA
    center: float = 0.0
    epsilon: float = DEFAULT_EPSILON
    g_perturbation: float | None = None
    guards: EvolutionGuards = field(default_factory=EvolutionGuards)
    sweep: SweepAxis | None = None
    fit: FitRequest | None = None
    escalate_grid_points: int | None = None
    output_dir: str | None = None
    workers: int = 1

    def __post_init__(self):
        problems = []
        if self.mode not in MODES:
            problems.append(f"mode: must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.n_kicks, int) or self.n_kicks < 1:
            problems.append(f"n_kicks: must be an integer >= 1, got {self.n_kicks!r}")
        if not _power_of_two(self.grid_points) or self.grid_points < 8:
            problems.append(
                f"grid_points: must be a power of two >= 8, got {self.grid_points!r}"
            )
        if self.escalate_grid_points is not None and (
            not _power_of_two(self.escalate_grid_points)
            or self.escalate_grid_points <= self.grid_points
        ):
            problems.append(
                "escalate_grid_points: must be a power of two larger than grid_points, "
                f"got {self.escalate_grid_points!r}"
            )
        if not (isinstance(self.sigma, (int, float)) and self.sigma > 0):
            problems.append(f"sigma: must be positive, got {self.sigma!r}")
        if not (isinstance(self.epsilon, (int, float)) and self.epsilon >= 0):
            problems.append(f"epsilon: must be >= 0, got {self.epsilon!r}")
        if self.mode == "distance" and self.epsilon == 0:
            problems.append("epsilon: must be nonzero in distance mode")
        if not isinstance(self.workers, int) or self.workers < 1:
            problems.append(f"workers: must be an integer >= 1, got {self.workers!r}")
        if problems:
            raise ConfigError("; ".join(problems))
        if self.mode == "loschmidt" and self.g_perturbation is None:
            object.__setattr__(self, "g_perturbation", DEFAULT_G_PERTURBATION)

    @property
    def scale(self) -> float:
        """(epsilon/hbar)^2, the small-shift scale of distance-like series."""
        eps = self.epsilon if self.mode != "loschmidt" else (self.g_perturbation or 0.0)
        return (eps / self.params.hbar_eff) ** 2

    def child(self, param: str, value) -> "ExperimentConfig":
        """Sweep child: one parameter replaced, sweep axis dropped."""
        updates: dict = {"sweep": None, "workers": 1}
        if param in ("eta", "g"):
            updates["params"] = replace(self.params, **{param: value})
        elif param == "hbar":
            updates["params"] = replace(self.params, hbar_eff=value)
        elif param in ("epsilon", "sigma"):
            updates[param] = value
        elif param in ("grid_points", "n_kicks"):
            updates[param] = int(value)
        else:
            raise ConfigError(f"unsupported sweep parameter {param!r}")
        return replace(self, **updates)

    def to_dict(self) -> dict:
        d = {
            "g": self.params.g,
            "eta": self.params.eta,
            "hbar": self.params.hbar_eff,
            "mode": self.mode,
            "n_kicks": self.n_kicks,
            "grid_points": self.grid_points,
            "sigma": self.sigma,
            "center": self.center,
            "epsilon": self.epsilon,
            "g_perturbation": self.g_perturbation,
            "guards": {
                "edge_fraction_max": self.guards.edge_fraction_max,
                "max_log_amplitude": self.guards.max_log_amplitude,
            },
            "escalate_grid_points": self.escalate_grid_points,
            "output_dir": self.output_dir,
            "workers": self.workers,
        }
        if self.sweep is not None:
            d["sweep"] = {"param": self.sweep.param, "values": list(self.sweep.values)}
        if self.fit is not None:
            d["fit"] = {
                "models": list(self.fit.models),
                "window": list(self.fit.window) if self.fit.window else None,
            }
        return d


def _power_of_two(n) -> bool:
    return isinstance(n, int) and not isinstance(n, bool) and n >= 1 and (n & (n - 1)) == 0


_TOP_LEVEL_KEYS = {
    "g", "eta", "hbar", "mode", "n_kicks", "grid_points", "sigma", "center",
    "epsilon", "g_perturbation", "guards", "sweep", "fit",
    "escalate_grid_points", "output_dir", "workers",
}


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Validate a parsed JSON object and fill defaults."""
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a JSON object, got {type(raw).__name__}")
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    missing = [key for key in ("g", "mode", "n_kicks") if key not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    try:
        params = ModelParams(
            g=float(raw["g"]),
            eta=float(raw.get("eta", 0.0)),
            hbar_eff=float(raw.get("hbar", 1.0)),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(f"g/eta/hbar: {err}") from err

    guards_raw = raw.get("guards", {})
    if not isinstance(guards_raw, dict):
        raise ConfigError(f"guards: must be an object, got {guards_raw!r}")
    unknown = set(guards_raw) - {"edge_fraction_max", "max_log_amplitude"}
    if unknown:
        raise ConfigError(f"guards: unknown keys {', '.join(sorted(unknown))}")
    try:
        guards = EvolutionGuards(
            edge_fraction_max=float(guards_raw.get("edge_fraction_max", 1e-8)),
            max_log_amplitude=float(guards_raw.get("max_log_amplitude", 300.0)),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(f"guards: {err}") from err

    sweep = None
    if raw.get("sweep") is not None:
        sweep_raw = raw["sweep"]
        if not isinstance(sweep_raw, dict) or set(sweep_raw) != {"param", "values"}:
            raise ConfigError('sweep: must be {"param": name, "values": [...]}')
        sweep = SweepAxis(param=sweep_raw["param"], values=tuple(sweep_raw["values"]))

    fit = None
    if raw.get("fit") is not None:
        fit_raw = raw["fit"]
        if not isinstance(fit_raw, dict) or set(fit_raw) - {"models", "window"}:
            raise ConfigError('fit: must be {"models": [...], "window": [t0, t1]?}')
        fit = FitRequest(
            models=tuple(fit_raw.get("models", ("exponential", "superexponential"))),
            window=tuple(fit_raw["window"]) if fit_raw.get("window") else None,
        )

    n_kicks = raw["n_kicks"]
    if isinstance(n_kicks, float) and n_kicks.is_integer():
        n_kicks = int(n_kicks)
    grid_points = raw.get("grid_points", DEFAULT_GRID_POINTS)
    if isinstance(grid_points, float) and grid_points.is_integer():
        grid_points = int(grid_points)

    return ExperimentConfig(
        params=params,
        mode=raw.get("mode"),
        n_kicks=n_kicks,
        grid_points=grid_points,
        sigma=float(raw.get("sigma", DEFAULT_SIGMA)),
        center=float(raw.get("center", 0.0)),
        epsilon=float(raw.get("epsilon", DEFAULT_EPSILON)),
        g_perturbation=(
            float(raw["g_perturbation"]) if raw.get("g_perturbation") is not None else None
        ),
        guards=guards,
        sweep=sweep,
        fit=fit,
        escalate_grid_points=(
            int(raw["escalate_grid_points"])
            if raw.get("escalate_grid_points") is not None
            else None
        ),
        output_dir=raw.get("output_dir"),
        workers=int(raw.get("workers", 1)),
    )


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Merge ``key=value`` strings (dotted paths allowed) onto a config dict."""
    merged = json.loads(json.dumps(raw))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, text = item.partition("=")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        node = merged
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {item!r} descends into a non-object")
        node[parts[-1]] = value
    return merged


def load_config(path, overrides: list[str] | None = None) -> ExperimentConfig:
    """Read, merge overrides, and validate a JSON config file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file {path} is not valid JSON: {err}") from err
    if overrides:
        raw = apply_overrides(raw, overrides)
    return config_from_dict(raw)
