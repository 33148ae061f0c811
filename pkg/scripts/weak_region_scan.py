#!/usr/bin/env python3
"""Scan an activity range and count weak-periodic fixed points per plane.

For each activity on the grid the solver is run on the requested invariant
plane and the line shows: total fixed points, how many are non-constant, and
the first coordinate of each point. For k >= 6 and i = 1 the predicted
activity window for extra I4 points is printed first, so the observed counts
can be read against it.

Typical runs:

  python3 scripts/weak_region_scan.py -k 2 -i 1 --set I2 --lmin 3 --lmax 6 -n 13
  python3 scripts/weak_region_scan.py -k 6 -i 1 --set I4 --lmin 4 --lmax 80 -n 20 --scale log
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hctree.weakperiodic import (
    SOLVE_SETS,
    WeakPeriodicParams,
    lambda_pm,
    solve_weak_periodic,
)


def grid(lo: float, hi: float, n: int, scale: str) -> list[float]:
    if n == 1:
        return [lo]
    if scale == "log":
        ratio = (hi / lo) ** (1.0 / (n - 1))
        return [lo * ratio ** j for j in range(n)]
    return [lo + (hi - lo) * j / (n - 1) for j in range(n)]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-k", type=int, required=True, help="branching number")
    ap.add_argument("-i", type=int, default=1, help="class-flipping generator count")
    ap.add_argument("--set", dest="invariant_set", choices=SOLVE_SETS, default="I2")
    ap.add_argument("--lmin", type=float, required=True)
    ap.add_argument("--lmax", type=float, required=True)
    ap.add_argument("-n", "--points", type=int, default=13)
    ap.add_argument("--scale", choices=("linear", "log"), default="linear")
    ap.add_argument("--tol", type=float, default=1e-12)
    args = ap.parse_args(argv)

    if args.k >= 6 and args.i == 1:
        lo, hi = lambda_pm(args.k)
        print(f"# predicted extra-point window for I4: ({lo:.10g}, {hi:.10g})")
    print(f"# k={args.k} i={args.i} set={args.invariant_set}")
    print("# lambda  count  non_constant  first_coordinates")

    for lam in grid(args.lmin, args.lmax, args.points, args.scale):
        wp = WeakPeriodicParams(args.k, args.i, lam)
        rep = solve_weak_periodic(wp, args.invariant_set, args.tol)
        firsts = " ".join(f"{fp.values[0]:.10g}" for fp in rep.fixed_points)
        print(f"{lam:<12.10g} {rep.count:<6d} {rep.non_ti_count:<13d} {firsts}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
