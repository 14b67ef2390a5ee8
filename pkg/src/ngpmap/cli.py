"""Command-line interface: simulate, sweep, fit, preset.

Exit codes: 0 on success (guard stops are recorded in the summary, not
fatal), 1 on configuration or validation errors, 2 on I/O failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import analysis
from .config import ConfigError, apply_overrides, config_from_dict
from .presets import PRESET_META, PRESETS
from .runner import read_trajectory_csv, run, run_many


class _Parser(argparse.ArgumentParser):
    # Usage mistakes are configuration errors (exit 1), not I/O errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="ngpm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--workers", type=int, default=None, help="parallel sweep children")
    common.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE",
        help="override a config key (dotted paths allowed), repeatable",
    )

    sub.add_parser("simulate", parents=[common], help="run a single experiment")
    sub.add_parser("sweep", parents=[common], help="run a one-axis parameter sweep")

    fit = sub.add_parser("fit", help="fit growth models to an existing trajectory CSV")
    fit.add_argument("csv", help="trajectory CSV produced by simulate/sweep")
    fit.add_argument("--column", default="auto",
                     help="series to fit: D, one_minus_le, mean_p2, or auto")
    fit.add_argument("--scale", type=float, default=None,
                     help="scale s for the double-log transform (default (1e-5/1)^2)")
    fit.add_argument("--g", type=float, default=1.0, dest="g_value",
                     help="kick strength anchoring the double-log transform")
    fit.add_argument("--window", type=int, nargs=2, metavar=("T0", "T1"), default=None)
    fit.add_argument("--out", default=None, help="write the fit summary JSON here")

    preset = sub.add_parser("preset", parents=[common], help="run a named preset")
    preset.add_argument("name", choices=sorted(PRESETS.keys()))
    return parser


def _load(args, base: dict | None = None):
    raw = dict(base or {})
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw.update(json.loads(path.read_text()))
        except json.JSONDecodeError as err:
            raise ConfigError(f"config file {path} is not valid JSON: {err}") from err
    if args.override:
        raw = apply_overrides(raw, args.override)
    config = config_from_dict(raw)
    if args.workers is not None:
        config = replace(config, workers=args.workers)
    return config


def _out_dir(args, config=None) -> Path:
    if args.out:
        return Path(args.out)
    if config is not None and config.output_dir:
        return Path(config.output_dir)
    return Path("ngpm_out")


def _cmd_simulate(args) -> int:
    config = _load(args)
    if config.sweep is not None:
        raise ConfigError("config contains a sweep axis; use the sweep subcommand")
    summary = run(config, _out_dir(args, config))
    _report(summary)
    return 0


def _cmd_sweep(args) -> int:
    config = _load(args)
    if config.sweep is None:
        raise ConfigError("sweep requires a config with a sweep axis")
    summary = run(config, _out_dir(args, config))
    _report(summary)
    return 0


def _cmd_preset(args) -> int:
    built = PRESETS[args.name]()
    out = _out_dir(args)
    if isinstance(built, list):
        if args.override:
            built = [
                (label, config_from_dict(apply_overrides(cfg.to_dict(), args.override)))
                for label, cfg in built
            ]
        workers = args.workers or 1
        summary = run_many(built, out, workers=workers,
                           meta={"preset": args.name, **PRESET_META[args.name]})
    else:
        raw = built.to_dict()
        if args.override:
            raw = apply_overrides(raw, args.override)
        config = config_from_dict(raw)
        if args.workers is not None:
            config = replace(config, workers=args.workers)
        summary = run(config, out)
        summary.setdefault("meta", {}).update({"preset": args.name, **PRESET_META[args.name]})
        (out / "summary.json").write_text(json.dumps(summary, indent=2))
    _report(summary)
    return 0


def _pick_column(columns: dict) -> str:
    for name in ("D", "one_minus_le", "mean_p2"):
        if any(v is not None for v in columns[name]):
            return name
    raise ConfigError("CSV contains no fittable series")


def _cmd_fit(args) -> int:
    path = Path(args.csv)
    if not path.exists():
        raise ConfigError(f"CSV file not found: {path}")
    columns = read_trajectory_csv(path)
    column = args.column if args.column != "auto" else _pick_column(columns)
    if column not in columns:
        raise ConfigError(f"unknown column {args.column!r}")
    pairs = [(t, y) for t, y in zip(columns["t"], columns[column]) if y is not None]
    if not pairs:
        raise ConfigError(f"column {column!r} is empty in {path}")
    t, y = zip(*pairs)
    scale = args.scale if args.scale is not None else (1e-5) ** 2
    if args.window is not None:
        fits = {}
        for model, fitter in (
            ("exponential", lambda: analysis.fit_exponential(t, y, tuple(args.window))),
            ("superexponential",
             lambda: analysis.fit_superexponential(t, y, scale, tuple(args.window), g=args.g_value)),
        ):
            try:
                fits[model] = fitter()
            except analysis.FitError as err:
                fits[model] = err
    else:
        fits = analysis.fit_growth_models(t, y, scale, g=args.g_value)
    payload = {
        "csv": str(path),
        "column": column,
        "scale": scale,
        "fits": {
            model: (result.to_dict() if isinstance(result, analysis.FitResult)
                    else {"error": str(result)})
            for model, result in fits.items()
        },
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return 0


def _report(summary: dict) -> None:
    for entry in summary["runs"]:
        fits = entry.get("fits", {})
        parts = []
        for model in ("exponential", "superexponential"):
            fit = fits.get(model)
            if isinstance(fit, dict) and "rate" in fit:
                parts.append(f"{model[:3]} rate={fit['rate']:.4g} r2={fit['r_squared']:.4f}")
        stopped = f" [stopped: {entry['terminated']}@{entry['terminated_at']}]" if entry["terminated"] else ""
        print(f"{entry['label']}: {entry['n_records']} records{stopped}  {'; '.join(parts)}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "fit": _cmd_fit,
        "preset": _cmd_preset,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
