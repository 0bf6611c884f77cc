"""Convexity: the greatest convex minorant via the double Legendre-Fenchel transform.

On a finite grid the biconjugate at a point ``x`` is the value of

    max_{v, xi}  v   s.t.  v + xi.(x_i - x) <= f(x_i)  for every grid point x_i,

i.e. the highest supporting hyperplane below the data that passes over ``x``.
We solve its LP dual (cheapest convex combination of grid values that lands on
``x``), which has ``k + 1`` rows instead of ``n``. In one dimension the lower
convex hull is computed directly with a monotone chain.
"""

from __future__ import annotations

import numpy as np

from .core import FunctionSample, Malformed, negate, point_str
from .lp import LpStatus, SolverError, solve_simplex_weights


def lower_hull_1d(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Indices of the vertices of the lower convex hull of ``(x_i, y_i)``.

    ``x`` must be strictly increasing. Collinear middle points are dropped.
    """
    hull: list = []
    for i in range(x.size):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.array(hull, dtype=np.int64)


def gcm_values(x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    h = lower_hull_1d(x, y)
    out = np.interp(x, x[h], y[h])
    # the hull never exceeds the data; guard against interpolation rounding
    return np.minimum(out, y)


def gcm_1d(f: FunctionSample) -> FunctionSample:
    if f.grid.k != 1:
        raise Malformed("gcm_1d needs a one-dimensional grid")
    return f.with_values(gcm_values(f.grid.axes[0], f.values))


def dlf_on_points(points: np.ndarray, values: np.ndarray, x) -> float:
    """Biconjugate of the data ``(points, values)`` evaluated at ``x``.

    ``points`` is an arbitrary ``(n, k)`` cloud; ``x`` must lie in its hull.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    values = np.asarray(values, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    status, v, _ = solve_simplex_weights(points, values, x)
    if status is not LpStatus.OPTIMAL:
        raise SolverError(f"convex-minorant LP is {status.value} at x={point_str(x)}")
    return v


def dlf_at_point(f: FunctionSample, x) -> float:
    """Greatest convex minorant of ``f`` at the grid point ``x``."""
    i = f.grid.index_of(x)
    v = dlf_on_points(f.grid.points(), f.values, f.grid.points()[i])
    return min(v, float(f.values[i]))


def convexify(f: FunctionSample) -> FunctionSample:
    """Greatest convex minorant of ``f`` on its grid."""
    if f.grid.k == 1:
        return gcm_1d(f)
    pts = f.grid.points()
    vals = f.values
    out = np.empty(vals.size)
    for i in range(vals.size):
        status, v, _ = solve_simplex_weights(pts, vals, pts[i])
        if status is not LpStatus.OPTIMAL:
            raise SolverError(
                f"convex-minorant LP is {status.value} at grid point {point_str(pts[i])}"
            )
        out[i] = min(v, vals[i])
    return f.with_values(out)


def convexify_lp(f: FunctionSample) -> FunctionSample:
    """Like :func:`convexify` but always through the LP, also for ``k = 1``."""
    pts = f.grid.points()
    return f.with_values(
        [min(dlf_on_points(pts, f.values, p), f.values[i]) for i, p in enumerate(pts)]
    )


def concavify(f: FunctionSample) -> FunctionSample:
    """Least concave majorant, ``-convexify(-f)``."""
    return negate(convexify(negate(f)))
