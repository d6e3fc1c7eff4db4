"""Render phase-diagram heatmaps from sweep CSV files.

The input is the sweep CSV schema

    e,omega,mu_min,has_lindbladian,frobenius_to_exact,best_branch,
    degenerate_flag,wall_time_ms

over a complete rectangular (E, omega) grid.  The selected value column is
drawn as a heatmap with E on the horizontal axis and omega on the vertical
axis.  NaN cells (points below the sweep's omega floor, degenerate-spectrum
points) are drawn white; exact zeros of mu_min get their own color so the
"Lindbladian exists" region is visually distinct from small positive
distances.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LogNorm, Normalize

EXPECTED_HEADER = [
    "e", "omega", "mu_min", "has_lindbladian", "frobenius_to_exact",
    "best_branch", "degenerate_flag", "wall_time_ms",
]
VALUE_COLUMNS = ("mu_min", "frobenius_to_exact")

ZERO_COLOR = "#e8f0e8"   # "Lindbladian exists" region
NAN_COLOR = "white"


@dataclass
class FigureSpec:
    input_csv: str
    output_image: str
    value_column: str = "mu_min"
    title: str | None = None
    xlabel: str = "driving amplitude E"
    ylabel: str = "driving frequency omega"
    white_nan: bool = True
    log_scale: bool = False
    dpi: int = 150
    zero_color: str = field(default=ZERO_COLOR)

    def __post_init__(self):
        if self.value_column not in VALUE_COLUMNS:
            raise ValueError(
                f"unknown value column {self.value_column!r}; "
                f"choose from {VALUE_COLUMNS}"
            )


def load_grid(path: str, column: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read one value column of a sweep CSV into a rectangular grid.

    Returns (e_values, omega_values, grid) with grid[i, j] the value at
    omega_values[i], e_values[j].  Raises on schema mismatch, on an
    incomplete or ragged grid, and on duplicate grid points.
    """
    if column not in VALUE_COLUMNS:
        raise ValueError(f"unknown value column {column!r}")
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EXPECTED_HEADER:
            raise ValueError(
                f"{path} does not match the sweep CSV schema "
                f"(header {reader.fieldnames})"
            )
        for row in reader:
            rows.append((float(row["e"]), float(row["omega"]), float(row[column])))
    if not rows:
        raise ValueError(f"{path} contains no data rows")

    es = sorted({e for e, _, _ in rows})
    omegas = sorted({om for _, om, _ in rows})
    if len(rows) != len(es) * len(omegas):
        raise ValueError(
            f"ragged grid: {len(rows)} rows cannot fill a "
            f"{len(omegas)} x {len(es)} rectangle"
        )
    e_index = {e: j for j, e in enumerate(es)}
    om_index = {om: i for i, om in enumerate(omegas)}
    grid = np.full((len(omegas), len(es)), np.nan)
    seen = np.zeros_like(grid, dtype=bool)
    for e, om, value in rows:
        i, j = om_index[om], e_index[e]
        if seen[i, j]:
            raise ValueError(f"duplicate grid point (E={e}, omega={om})")
        seen[i, j] = True
        grid[i, j] = value
    return np.asarray(es), np.asarray(omegas), grid


def build_figure(spec: FigureSpec):
    """Assemble the heatmap figure; separated from file output so tests can
    inspect the rendered canvas."""
    es, omegas, grid = load_grid(spec.input_csv, spec.value_column)
    masked = np.ma.masked_invalid(grid)

    cmap = matplotlib.colormaps["viridis"].copy()
    if spec.white_nan:
        cmap.set_bad(NAN_COLOR)
    cmap.set_under(spec.zero_color)

    positive = grid[np.isfinite(grid) & (grid > 0.0)]
    if positive.size:
        vmin = float(positive.min())
        vmax = float(positive.max())
    else:
        vmin, vmax = 1e-12, 1.0
    if vmax <= vmin:
        vmax = vmin * 10.0
    if spec.log_scale:
        norm = LogNorm(vmin=vmin, vmax=vmax)
    else:
        norm = Normalize(vmin=vmin, vmax=vmax)

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    mesh = ax.pcolormesh(es, omegas, masked, cmap=cmap, norm=norm,
                         shading="nearest")
    fig.colorbar(mesh, ax=ax, label=spec.value_column)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    return fig, ax, mesh


def render_heatmap(spec: FigureSpec) -> str:
    """Render the heatmap to ``spec.output_image`` and return the path."""
    fig, _, _ = build_figure(spec)
    try:
        fig.savefig(spec.output_image, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return spec.output_image


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="phase-heatmap",
        description="Render a phase-diagram heatmap from a sweep CSV file.",
    )
    parser.add_argument("--in", dest="input_csv", required=True,
                        help="sweep CSV file")
    parser.add_argument("--col", dest="value_column", default="mu_min",
                        choices=VALUE_COLUMNS, help="value column to draw")
    parser.add_argument("--out", dest="output_image", required=True,
                        help="output image path (png, pdf, svg, ...)")
    parser.add_argument("--title", default=None)
    parser.add_argument("--log", action="store_true",
                        help="logarithmic color scale")
    parser.add_argument("--no-white-nan", action="store_true",
                        help="let the colormap handle NaN cells instead of "
                             "drawing them white")
    args = parser.parse_args(argv)
    spec = FigureSpec(
        input_csv=args.input_csv,
        output_image=args.output_image,
        value_column=args.value_column,
        title=args.title,
        log_scale=args.log,
        white_nan=not args.no_white_nan,
    )
    try:
        render_heatmap(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
