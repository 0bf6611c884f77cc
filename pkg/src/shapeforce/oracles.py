"""Independent reference implementations used to cross-check the LP-based operators.

* ``brute_force_dlf``: the convex minorant at ``x`` as the cheapest convex
  combination of at most ``k + 1`` grid values landing on ``x``, by enumeration.
* ``linear_scan_q``: quasi-convex minorant by scanning every level upward.
* ``hull_2d`` / ``in_hull_2d``: monotone-chain hull and orientation tests.

``run_oracles`` drives all of them on random instances and backs the
``oracle-check`` CLI subcommand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .convex import dlf_at_point, gcm_1d
from .core import LEQ_TOL, FunctionSample, RectGrid
from .geometry import in_convex_hull
from .quasiconvex import quasiconvexify

HULL_TOL = 1e-9


def brute_force_dlf(points: np.ndarray, values: np.ndarray, x, tol: float = 1e-9) -> float:
    """min sum(a_j f_j) over convex weights on at most k+1 points with sum(a_j x_j) = x."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n, k = points.shape
    best = np.inf
    for m in range(1, min(n, k + 1) + 1):
        for sub in itertools.combinations(range(n), m):
            P = points[list(sub)]
            A = np.vstack([np.ones(m), P.T])
            rhs = np.concatenate([[1.0], x])
            if np.linalg.matrix_rank(A) < m:
                continue  # affinely dependent: a smaller subset covers it
            a = np.linalg.lstsq(A, rhs, rcond=None)[0]
            if np.max(np.abs(A @ a - rhs)) > tol or np.min(a) < -tol:
                continue
            best = min(best, float(a @ values[list(sub)]))
    return best


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points) -> np.ndarray:
    """Counter-clockwise hull vertices (monotone chain); collinear points dropped."""
    pts = sorted(set(map(tuple, np.asarray(points, dtype=float))))
    if len(pts) <= 2:
        return np.array(pts)
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _seg_dist(x, a, b) -> float:
    ab = b - a
    L = ab @ ab
    t = 0.0 if L == 0 else float(np.clip((x - a) @ ab / L, 0.0, 1.0))
    return float(np.linalg.norm(x - (a + t * ab)))


def in_hull_2d(x, points, tol: float = HULL_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    H = hull_2d(points)
    if len(H) == 1:
        return bool(np.linalg.norm(x - H[0]) <= tol)
    if len(H) == 2:
        return _seg_dist(x, H[0], H[1]) <= tol
    for i in range(len(H)):
        a, b = H[i], H[(i + 1) % len(H)]
        if _cross(a, b, x) < 0 and _seg_dist(x, a, b) > tol:
            return False
    return True


def linear_scan_q(f: FunctionSample, member: Optional[Callable] = None) -> np.ndarray:
    """Quasi-convex minorant by testing every level from the bottom up."""
    pts = f.grid.points()
    vals = f.values
    levels = np.unique(vals)
    if member is None:
        member = in_hull_2d if f.grid.k == 2 else in_convex_hull
    out = np.empty(vals.size)
    for i in range(vals.size):
        for y in levels:
            if member(pts[i], pts[vals <= y + LEQ_TOL]):
                out[i] = y
                break
    return out


# ---------------------------------------------------------------------------


@dataclass
class OracleResult:
    name: str
    cases: int
    failures: int
    max_diff: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<10} cases={self.cases:<6} failures={self.failures:<4} "
                f"max|diff|={self.max_diff:.3g} (tol {self.tol:g})")


def _random_values(rng: np.random.Generator, n: int) -> np.ndarray:
    # mix continuous values with heavily tied integer values
    if rng.random() < 0.5:
        return rng.normal(size=n)
    return rng.integers(0, 4, size=n).astype(float)


def _random_axis(rng: np.random.Generator, m: int) -> np.ndarray:
    if rng.random() < 0.5:
        return np.linspace(0.0, 1.0, m)
    return np.cumsum(rng.uniform(0.2, 1.0, size=m))


def check_gcm(cases: int, rng) -> OracleResult:
    """LP biconjugate at every point against the 1-D lower hull."""
    worst, bad = 0.0, 0
    for _ in range(cases):
        g = RectGrid([_random_axis(rng, int(rng.integers(2, 16)))])
        f = FunctionSample(g, _random_values(rng, g.size))
        ref = gcm_1d(f).values
        lp = np.array([dlf_at_point(f, p) for p in g.points()])
        d = float(np.max(np.abs(lp - ref)))
        worst = max(worst, d)
        bad += d > 1e-7
    return OracleResult("gcm", cases, bad, worst, 1e-7)


def check_simplex(cases: int, rng) -> OracleResult:
    """LP biconjugate against enumeration of simplex weights on tiny grids."""
    worst, bad = 0.0, 0
    for c in range(cases):
        if c % 2 == 0:
            g = RectGrid([_random_axis(rng, int(rng.integers(2, 8)))])
        else:
            g = RectGrid([_random_axis(rng, int(rng.integers(2, 4))),
                          _random_axis(rng, int(rng.integers(2, 4)))])
        f = FunctionSample(g, _random_values(rng, g.size))
        pts = g.points()
        for i, p in enumerate(pts):
            ref = min(brute_force_dlf(pts, f.values, p), f.values[i])
            d = abs(dlf_at_point(f, p) - ref)
            worst = max(worst, d)
            bad += d > 1e-6
    return OracleResult("simplex", cases, bad, worst, 1e-6)


def check_bisection(cases: int, rng) -> OracleResult:
    """Bisection over levels against a linear scan using orientation-test hulls."""
    worst, bad = 0.0, 0
    for _ in range(cases):
        g = RectGrid([_random_axis(rng, int(rng.integers(2, 6))),
                      _random_axis(rng, int(rng.integers(2, 6)))])
        f = FunctionSample(g, _random_values(rng, g.size))
        a = quasiconvexify(f).values
        b = linear_scan_q(f)
        d = float(np.max(np.abs(a - b)))
        worst = max(worst, d)
        bad += not np.array_equal(a, b)
    return OracleResult("bisection", cases, bad, worst, 0.0)


def check_hull(cases: int, rng) -> OracleResult:
    """LP hull membership against the 2-D orientation test."""
    bad = 0
    for c in range(cases):
        m = int(rng.integers(1, 9))
        if c % 2 == 0:
            S = rng.uniform(-1, 1, size=(m, 2))
            x = rng.uniform(-1.2, 1.2, size=2)
        else:
            # lattice instances put many queries exactly on edges and vertices
            S = rng.integers(0, 4, size=(m, 2)).astype(float)
            x = rng.integers(0, 4, size=2).astype(float)
        bad += in_convex_hull(x, S) != in_hull_2d(x, S)
    return OracleResult("hull", cases, bad, float(bad), 0.0)


ORACLES: Dict[str, Callable] = {
    "gcm": check_gcm,
    "simplex": check_simplex,
    "bisection": check_bisection,
    "hull": check_hull,
}


def run_oracles(cases: int = 200, seed: int = 0, only: Optional[Sequence[str]] = None
                ) -> List[OracleResult]:
    names = list(ORACLES) if not only else list(only)
    unknown = [n for n in names if n not in ORACLES]
    if unknown:
        raise KeyError(f"unknown oracle(s) {unknown}; choose from {list(ORACLES)}")
    out = []
    for name in names:
        rng = np.random.default_rng([seed, list(ORACLES).index(name)])
        out.append(ORACLES[name](cases, rng))
    return out
