"""Boundary laws constant on the four classes cut out by an index-4 normal
subgroup of the tree's automorphism group.

The update map W acts on positive 4-vectors (z1, z2, z3, z4). Each component
combines a powered numerator, an additive middle factor and a plain divisor;
i counts the generators that flip the subgroup class (1 <= i <= k+1) and
enters through the exponents k/i and 1 - 1/i, evaluated as real powers.
W leaves four planes invariant:

    I1: z1=z2=z3=z4      I2: z1=z3, z2=z4
    I3: z1=z2, z3=z4     I4: z1=z4, z2=z3

and the fixed points on I2, I3, I4 are found by a damped-Newton multistart
on the corresponding 2-variable reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    BoundaryLaw,
    ConvergenceError,
    DomainError,
    ModelParams,
    weak_periodic_law,
)

__all__ = [
    "WeakPeriodicParams",
    "WeakSolveReport",
    "invariant_set_check",
    "lambda_pm",
    "s_pm",
    "solve_weak_periodic",
    "weak_system_map",
]

SOLVE_SETS = ("I2", "I3", "I4")

_GRID_POINTS = 32
_GRID_LO = 1e-4
_GRID_HI = 10.0
_NEWTON_MAX_ITER = 100
_NEWTON_MIN_STEP_FACTOR = 2.0 ** -20
_ITERATE_FLOOR = 1e-30
_POLISH_FLOOR = 1e-15
_ROOT_UNCERTAINTY = 1e-6
_DEDUP_TOL = 1e-8
_DIAGONAL_TOL = 1e-8


@dataclass(frozen=True)
class WeakPeriodicParams:
    """Branching number k >= 2, class-flipping generator count 1 <= i <= k+1,
    activity lam > 0."""

    k: int
    i: int
    lam: float

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 2:
            raise DomainError(f"k must be an integer >= 2, got {self.k!r}")
        if not isinstance(self.i, int) or isinstance(self.i, bool) or not 1 <= self.i <= self.k + 1:
            raise DomainError(f"i must be an integer in [1, k+1], got {self.i!r}")
        if not (self.lam > 0) or not math.isfinite(self.lam):
            raise DomainError(f"lam must be a positive finite number, got {self.lam!r}")

    def model(self) -> ModelParams:
        return ModelParams(self.k, self.lam)


def _component(k: int, i: int, lam: float, za: float, zb: float, zc: float) -> float:
    # za feeds both numerator and the powered part of the middle factor,
    # zb the additive part, zc the plain divisor
    base = 1.0 + lam * za
    mid = base ** (k / i) + lam * zb ** (1.0 - 1.0 / i)
    return base ** k / (mid ** i * (1.0 + lam * zc) ** (k - i))


def weak_system_map(wp: WeakPeriodicParams, z) -> tuple[float, float, float, float]:
    """One application of the four-component update W."""
    z1, z2, z3, z4 = (float(v) for v in z)
    for v in (z1, z2, z3, z4):
        if not (v > 0) or not math.isfinite(v):
            raise DomainError(f"weak-system values must be positive, got {z!r}")
    k, i, lam = wp.k, wp.i, wp.lam
    return (
        _component(k, i, lam, z3, z4, z2),
        _component(k, i, lam, z4, z3, z1),
        _component(k, i, lam, z1, z2, z4),
        _component(k, i, lam, z2, z1, z3),
    )


def _in_set(set_id: str, z, tol: float) -> bool:
    z1, z2, z3, z4 = z
    if set_id == "I1":
        return max(z1, z2, z3, z4) - min(z1, z2, z3, z4) <= tol
    if set_id == "I2":
        return abs(z1 - z3) <= tol and abs(z2 - z4) <= tol
    if set_id == "I3":
        return abs(z1 - z2) <= tol and abs(z3 - z4) <= tol
    if set_id == "I4":
        return abs(z1 - z4) <= tol and abs(z2 - z3) <= tol
    raise DomainError(f"unknown invariant set {set_id!r}")


def invariant_set_check(wp: WeakPeriodicParams, set_id: str, z, tol: float = 1e-9) -> bool:
    """True when z lies in the named plane and W(z) stays in it."""
    z = tuple(float(v) for v in z)
    if not _in_set(set_id, z, tol):
        return False
    return _in_set(set_id, weak_system_map(wp, z), tol)


def _embed(set_id: str, a: float, b: float) -> tuple[float, float, float, float]:
    if set_id == "I2":
        return (a, b, a, b)
    if set_id == "I3":
        return (a, a, b, b)
    if set_id == "I4":
        return (a, b, b, a)
    raise DomainError(f"solver supports sets {SOLVE_SETS}, got {set_id!r}")


def _project(set_id: str, z) -> tuple[float, float]:
    if set_id == "I3":
        return (z[0], z[2])
    return (z[0], z[1])


def _reduced_map(wp: WeakPeriodicParams, set_id: str, a: float, b: float) -> tuple[float, float]:
    return _project(set_id, weak_system_map(wp, _embed(set_id, a, b)))


def _newton_from(wp, set_id, a, b, tol):
    """Damped Newton on G(v) = reduced(v) - v; central-difference Jacobian.

    Polishes past the requested tolerance down to the attainable floor (near
    a bifurcation the residual goes flat well above zero, and iterates that
    merely sit inside the flat region would otherwise pass for extra roots),
    then returns the best iterate if it meets tol, else None. The step is
    halved while the sup-norm residual fails to decrease; iterates are
    floored at a tiny positive value so the map stays inside its domain.
    """

    def g(a, b):
        ra, rb = _reduced_map(wp, set_id, a, b)
        return ra - a, rb - b

    try:
        ga, gb = g(a, b)
    except (OverflowError, ValueError):
        return None
    best = None  # (residual, a, b, undamped step size = distance-to-root estimate)
    for _ in range(_NEWTON_MAX_ITER):
        res = max(abs(ga), abs(gb))
        if res <= _POLISH_FLOOR * max(1.0, abs(a), abs(b)):
            best = (res, a, b, 0.0)
            break
        ha = max(1e-7 * abs(a), 1e-9)
        hb = max(1e-7 * abs(b), 1e-9)
        try:
            gpa = g(a + ha, b)
            gma = g(max(a - ha, _ITERATE_FLOOR), b)
            gpb = g(a, b + hb)
            gmb = g(a, max(b - hb, _ITERATE_FLOOR))
        except (OverflowError, ValueError):
            break
        da = a - max(a - ha, _ITERATE_FLOOR) + ha
        db = b - max(b - hb, _ITERATE_FLOOR) + hb
        j00 = (gpa[0] - gma[0]) / da
        j10 = (gpa[1] - gma[1]) / da
        j01 = (gpb[0] - gmb[0]) / db
        j11 = (gpb[1] - gmb[1]) / db
        det = j00 * j11 - j01 * j10
        if det == 0.0 or not math.isfinite(det):
            break
        step_a = -(j11 * ga - j01 * gb) / det
        step_b = -(-j10 * ga + j00 * gb) / det
        if best is None or res < best[0]:
            best = (res, a, b, max(abs(step_a), abs(step_b)))
        factor = 1.0
        while factor >= _NEWTON_MIN_STEP_FACTOR:
            na = max(a + factor * step_a, _ITERATE_FLOOR)
            nb = max(b + factor * step_b, _ITERATE_FLOOR)
            try:
                nga, ngb = g(na, nb)
            except (OverflowError, ValueError):
                factor *= 0.5
                continue
            if max(abs(nga), abs(ngb)) < res:
                a, b, ga, gb = na, nb, nga, ngb
                break
            factor *= 0.5
        else:
            break
    if best is None:
        return None
    res, a, b, step_size = best
    if res > tol:
        return None
    # a small residual in a near-flat region is not a root; the full Newton
    # step says how far the nearest actual root still is
    if step_size > _ROOT_UNCERTAINTY * max(1.0, abs(a), abs(b)):
        return None
    return (a, b)


@dataclass(frozen=True)
class WeakSolveReport:
    """Fixed points of W on one invariant plane.

    Each ordered fixed point is its own entry (a swapped pair counts twice,
    matching the ordered-solution bookkeeping of the two-periodic system).
    ti_flags marks the points lying on the diagonal I1.
    """

    params: WeakPeriodicParams
    invariant_set: str
    fixed_points: tuple[BoundaryLaw, ...]
    residuals: tuple[float, ...]
    ti_flags: tuple[bool, ...]

    @property
    def count(self) -> int:
        return len(self.fixed_points)

    @property
    def non_ti_count(self) -> int:
        return self.count - sum(self.ti_flags)


def solve_weak_periodic(
    wp: WeakPeriodicParams,
    invariant_set: str,
    tol: float = 1e-12,
    grid_points: int = _GRID_POINTS,
) -> WeakSolveReport:
    """All fixed points of W on one plane, by multistart damped Newton.

    Starts on a grid_points x grid_points log-spaced grid over
    (1e-4, 10)^2 and keeps points whose full 4-component residual meets tol.
    Converged points are merged transitively within a sqrt(tol)-scale radius
    (right at a bifurcation the merging pair is reported as one point).
    Results are sorted by coordinates, so output order is deterministic.
    """
    if invariant_set not in SOLVE_SETS:
        raise DomainError(f"invariant_set must be one of {SOLVE_SETS}, got {invariant_set!r}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if grid_points < 2:
        raise DomainError("grid_points must be at least 2")

    # At a bifurcation the residual vanishes quadratically, so Newton limits
    # scatter over a sqrt(tol)-sized blot around the true point; merge
    # transitively at that scale or the blot masquerades as many solutions.
    merge_radius = max(_DEDUP_TOL, 8.0 * math.sqrt(tol))
    ratio = (_GRID_HI / _GRID_LO) ** (1.0 / (grid_points - 1))
    grid = [_GRID_LO * ratio ** j for j in range(grid_points)]
    clusters: list[list[tuple[float, float]]] = []
    for a0 in grid:
        for b0 in grid:
            got = _newton_from(wp, invariant_set, a0, b0, tol)
            if got is None:
                continue
            a, b = got
            if not (a > 1e-12 and b > 1e-12 and a < 1e9 and b < 1e9):
                continue
            home = None
            for cluster in clusters:
                if any(max(abs(a - fa), abs(b - fb)) < merge_radius for fa, fb in cluster):
                    if home is None:
                        home = cluster
                        cluster.append((a, b))
                    else:
                        home.extend(cluster)
                        cluster.clear()
            if home is None:
                clusters.append([(a, b)])

    def full_residual(a: float, b: float) -> float:
        z = _embed(invariant_set, a, b)
        image = weak_system_map(wp, z)
        return max(abs(zi - wi) for zi, wi in zip(z, image))

    found = sorted(
        min(cluster, key=lambda p: (full_residual(*p), p))
        for cluster in clusters
        if cluster
    )

    laws, residuals, ti_flags = [], [], []
    for a, b in found:
        z = _embed(invariant_set, a, b)
        res = full_residual(a, b)
        if res > tol:
            raise ConvergenceError(
                "accepted fixed point fails the full 4-component residual",
                point=z,
                residual=res,
                tol=tol,
            )
        laws.append(weak_periodic_law(z, invariant_set))
        residuals.append(res)
        # same resolution scale as the clustering: a point that cannot be
        # told apart from the diagonal counts as constant
        diag_tol = max(_DIAGONAL_TOL, merge_radius)
        ti_flags.append(max(z) - min(z) <= diag_tol * max(1.0, max(z)))
    return WeakSolveReport(
        params=wp,
        invariant_set=invariant_set,
        fixed_points=tuple(laws),
        residuals=tuple(residuals),
        ti_flags=tuple(ti_flags),
    )


def s_pm(k: int) -> tuple[float, float]:
    """The two roots (k - 3 -+ sqrt(k**2 - 6k + 1)) / 4; real from k = 6 up.

    Vieta gives s_minus * s_plus = 1/2 for every such k.
    """
    if not isinstance(k, int) or isinstance(k, bool) or k < 6:
        raise DomainError(f"s_pm needs an integer k >= 6, got {k!r}")
    d = math.sqrt(k * k - 6.0 * k + 1.0)
    return ((k - 3.0 - d) / 4.0, (k - 3.0 + d) / 4.0)


def lambda_pm(k: int) -> tuple[float, float]:
    """Activity window ((s+1)**k * s at each root) on which the I4 plane is
    guaranteed to carry at least three fixed points for i = 1."""
    sm, sp = s_pm(k)
    return ((sm + 1.0) ** k * sm, (sp + 1.0) ** k * sp)
