"""Command-line driver for (E, omega) phase-diagram sweeps.

Flags mirror the sweep configuration one to one; a key = value config file
can supply defaults, with explicit flags taking precedence.  Exit codes:
0 success, 2 usage error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import sys

from .sweep import PIPELINES, SweepConfig, UsageError, run_sweep


def _parse_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floqlind-sweep",
        description="Sweep an (E, omega) grid at fixed (gamma, phi) and write "
                    "phase-diagram CSV data.",
    )
    parser.add_argument("--config", help="key = value file supplying defaults")
    parser.add_argument("--gamma", type=float, help="dissipation strength")
    parser.add_argument("--phi", type=float, default=None, help="driving phase (default 0)")
    parser.add_argument("--e-min", type=float, help="smallest driving amplitude")
    parser.add_argument("--e-max", type=float, help="largest driving amplitude")
    parser.add_argument("--e-count", type=int, help="grid points along E")
    parser.add_argument("--omega-min", type=float, help="smallest driving frequency")
    parser.add_argument("--omega-max", type=float, help="largest driving frequency")
    parser.add_argument("--omega-count", type=int, help="grid points along omega")
    parser.add_argument("--pipeline", choices=PIPELINES, help="which generator to test")
    parser.add_argument("--order", type=int, default=None,
                        help="expansion order (ignored for the exact pipeline)")
    parser.add_argument("--x-range", type=int, default=None,
                        help="logarithm branches scanned per complex pair (default 5)")
    parser.add_argument("--steps-per-period", type=int, default=None,
                        help="integrator steps per driving period (default 2000)")
    parser.add_argument("--omega-floor", type=float, default=None,
                        help="points below this frequency are emitted as NaN")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--workers", type=int, default=None, help="parallel workers")
    return parser


_DEFAULTS = {
    "phi": 0.0,
    "order": 0,
    "x_range": 5,
    "steps_per_period": 2000,
    "omega_floor": 0.0,
    "workers": 1,
    "output_path": "sweep.csv",
}

_REQUIRED = ("gamma", "e_min", "e_max", "e_count",
             "omega_min", "omega_max", "omega_count", "pipeline")

_CASTS = {
    "gamma": float, "phi": float, "e_min": float, "e_max": float,
    "e_count": int, "omega_min": float, "omega_max": float,
    "omega_count": int, "pipeline": str, "order": int, "x_range": int,
    "steps_per_period": int, "omega_floor": float, "output_path": str,
    "workers": int,
}


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    merged: dict = dict(_DEFAULTS)
    if args.config:
        file_values = _parse_config_file(args.config)
        if "out" in file_values:
            file_values["output_path"] = file_values.pop("out")
        for key, value in file_values.items():
            if key not in _CASTS:
                raise UsageError(f"unknown config key {key!r}")
            merged[key] = _CASTS[key](value)
    flag_map = {
        "gamma": args.gamma, "phi": args.phi, "e_min": args.e_min,
        "e_max": args.e_max, "e_count": args.e_count,
        "omega_min": args.omega_min, "omega_max": args.omega_max,
        "omega_count": args.omega_count, "pipeline": args.pipeline,
        "order": args.order, "x_range": args.x_range,
        "steps_per_period": args.steps_per_period,
        "omega_floor": args.omega_floor, "output_path": args.out,
        "workers": args.workers,
    }
    for key, value in flag_map.items():
        if value is not None:
            merged[key] = value
    missing = [key for key in _REQUIRED if key not in merged]
    if missing:
        raise UsageError(f"missing required options: {', '.join(missing)}")
    config = SweepConfig(**merged)
    config.validate()
    return config


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        _, summary = run_sweep(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures map to exit code 1
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1
    print(
        f"{summary['points']} points ({summary['evaluated']} evaluated, "
        f"{summary['non_lindbladian']} non-Lindbladian, "
        f"{summary['degenerate']} degenerate) in "
        f"{summary['elapsed_seconds']:.1f} s -> {config.output_path}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
