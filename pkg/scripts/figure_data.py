#!/usr/bin/env python3
"""Dump the k=3 diagnostic curves as CSV files ready for plotting.

Writes three files into --outdir:

  discriminant.csv   D(lambda) on a linear grid through the critical activity
  h_curve.csv        9*kappa**2 - 1 along the alternating pair (log grid)
  g_curve.csv        9*kappa*lambda/(lambda+1) - 1 along the pair (log grid)

Example gnuplot session:

  plot 'discriminant.csv' using 1:2 with lines title 'D'
"""

import argparse
import csv
import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hctree.extremality import g_function, h_function
from hctree.solvers import critical_lambda, discriminant_k3


def linear_grid(lo: float, hi: float, n: int) -> list[float]:
    return [lo + (hi - lo) * j / (n - 1) for j in range(n)]


def log_grid(lo: float, hi: float, n: int) -> list[float]:
    ratio = (hi / lo) ** (1.0 / (n - 1))
    return [lo * ratio ** j for j in range(n)]


def write_csv(path: pathlib.Path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="figure_data", help="output directory")
    ap.add_argument("--points", type=int, default=400, help="grid points per curve")
    ap.add_argument("--lambda-max", type=float, default=100.0, help="upper end of the grids")
    args = ap.parse_args(argv)

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    lam_cr = critical_lambda(3)

    # discriminant through the threshold: negative, zero, positive
    grid = linear_grid(1.0, min(args.lambda_max, 3.0), args.points)
    write_csv(
        outdir / "discriminant.csv",
        ["lambda", "D"],
        [(f"{lam:.15g}", f"{discriminant_k3(lam):.15g}") for lam in grid],
    )

    # both pair diagnostics only exist above the threshold
    lo = lam_cr * (1.0 + 1e-6)
    grid = log_grid(lo, args.lambda_max, args.points)
    write_csv(
        outdir / "h_curve.csv",
        ["lambda", "h"],
        [(f"{lam:.15g}", f"{h_function(lam):.15g}") for lam in grid],
    )
    write_csv(
        outdir / "g_curve.csv",
        ["lambda", "g"],
        [(f"{lam:.15g}", f"{g_function(lam):.15g}") for lam in grid],
    )

    # quick sanity: h and g must be negative everywhere on the grid
    worst_h = max(h_function(lam) for lam in grid)
    worst_g = max(g_function(lam) for lam in grid)
    print(f"max h on grid = {worst_h:.6g}, max g on grid = {worst_g:.6g}")
    if not (worst_h < 0 and worst_g < 0):
        print("unexpected sign: diagnostic curve crossed zero", file=sys.stderr)
        return 1
    assert math.isfinite(worst_h) and math.isfinite(worst_g)
    return 0


if __name__ == "__main__":
    sys.exit(main())
