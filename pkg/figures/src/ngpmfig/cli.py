"""Render CLI: a spec file or positional CSVs with a panel flag.

Exit codes: 0 success, 1 bad inputs or spec, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data import DataError
from .render import FigureSpec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ngpm-render", description=__doc__)
    parser.add_argument("csvs", nargs="*", help="trajectory CSV files (growth panels)")
    parser.add_argument("--spec", help="JSON figure spec; other flags are ignored")
    parser.add_argument("--panel", choices=("growth_curves", "rate_vs_eta", "rate_vs_hbar"),
                        default="growth_curves")
    parser.add_argument("--summary", help="run summary JSON (fits, labels, scales)")
    parser.add_argument("--out", default="figure.png", help="output image (png/svg/pdf)")
    parser.add_argument("--column", default="auto",
                        help="series column: D, one_minus_le, mean_p2, or auto")
    parser.add_argument("--yscale", choices=("log", "double-log", "linear"), default="log")
    parser.add_argument("--scale", type=float, default=None,
                        help="scale for the double-log transform when not in the summary")
    parser.add_argument("--no-overlay", action="store_true",
                        help="markers only, no fitted-law lines")
    return parser


def spec_from_file(path) -> FigureSpec:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: no such spec file")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise DataError(f"{path}: spec is not valid JSON ({err})") from err
    known = {"panel", "out", "csvs", "summary", "column", "yscale", "overlay", "scale"}
    unknown = set(raw) - known
    if unknown:
        raise DataError(f"{path}: unknown spec keys {sorted(unknown)}")
    for key in ("panel", "out"):
        if key not in raw:
            raise DataError(f"{path}: spec is missing {key!r}")
    raw["csvs"] = tuple(raw.get("csvs", ()))
    return FigureSpec(**raw)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.spec:
            spec = spec_from_file(args.spec)
        else:
            spec = FigureSpec(
                panel=args.panel,
                out=args.out,
                csvs=tuple(args.csvs),
                summary=args.summary,
                column=args.column,
                yscale=args.yscale,
                overlay=not args.no_overlay,
                scale=args.scale,
            )
        render(spec)
        return 0
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
