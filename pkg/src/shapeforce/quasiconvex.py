"""Quasi-convexity: the greatest quasi-convex minorant on a grid.

The value at ``x`` is the smallest observed level ``y`` such that ``x`` lies
in the convex hull of the lower contour set ``{x_i : f(x_i) <= y}``. Contour
sets grow with ``y``, so hull membership is monotone in the level and a
bisection over the sorted distinct values finds the answer in
``ceil(log2 m)`` membership tests.
"""

from __future__ import annotations

import numpy as np

from .core import LEQ_TOL, FunctionSample, negate
from .geometry import _in_hull
from .lp import FEAS_TOL, _max_iter


def lower_contour(f: FunctionSample, y: float) -> np.ndarray:
    """Grid points with ``f <= y``, as an ``(m, k)`` array (``m`` may be 0)."""
    return f.grid.points()[f.values <= y + LEQ_TOL]


def _q_bisect(pts: np.ndarray, vals: np.ndarray, levels: np.ndarray, i: int) -> float:
    # x_i sits in its own contour set at level f(x_i), so that level is feasible
    lo, hi = 0, int(np.searchsorted(levels, vals[i]))
    x = pts[i]
    while lo < hi:
        mid = (lo + hi) // 2
        S = pts[vals <= levels[mid] + LEQ_TOL]
        if _in_hull(S, x, FEAS_TOL, _max_iter(*S.shape)):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[hi])


def quasiconvexify_at(f: FunctionSample, x) -> float:
    i = f.grid.index_of(x)
    levels = np.unique(f.values)
    return _q_bisect(f.grid.points(), f.values, levels, i)


def quasiconvexify(f: FunctionSample) -> FunctionSample:
    """Greatest quasi-convex minorant of ``f`` on its grid."""
    pts = f.grid.points()
    vals = f.values
    levels = np.unique(vals)
    return f.with_values([_q_bisect(pts, vals, levels, i) for i in range(vals.size)])


def quasiconcavify(f: FunctionSample) -> FunctionSample:
    return negate(quasiconvexify(negate(f)))
