"""Random grids and shape-restricted samples shared by the test modules."""

from __future__ import annotations

import numpy as np

from shapeforce.core import FunctionSample, RectGrid


def equi_grid(shape, lo=0.0, hi=1.0) -> RectGrid:
    return RectGrid([np.linspace(lo, hi, m) for m in shape])


def random_shape(rng, k=None, max_total=36):
    """Axis lengths with at least 2 points each and a bounded total."""
    k = k or int(rng.integers(1, 4))
    cap = {1: 15, 2: 6, 3: 4}.get(k, 3)
    while True:
        shape = tuple(int(m) for m in rng.integers(2, cap + 1, size=k))
        if np.prod(shape) <= max(max_total, 2 ** k) or k == 1:
            return shape


def random_values(rng, n, scale=1.0):
    kind = rng.integers(0, 3)
    if kind == 0:
        return scale * rng.normal(size=n)
    if kind == 1:
        return scale * rng.integers(-2, 3, size=n).astype(float)
    return scale * rng.uniform(-1, 1, size=n)


def random_pair(rng, grid, scale=1.0):
    """Two samples on ``grid``; sometimes ordered, sometimes nearby."""
    f = random_values(rng, grid.size, scale)
    kind = rng.integers(0, 3)
    if kind == 0:
        g = random_values(rng, grid.size, scale)
    elif kind == 1:
        g = f + scale * rng.uniform(0, 1, size=grid.size)  # g >= f
    else:
        g = f + 0.1 * scale * rng.normal(size=grid.size)
    return FunctionSample(grid, f), FunctionSample(grid, g)


# --- generators of samples already in a shape class -------------------------


def convex_values(rng, grid):
    """Max of affine pieces plus a PSD quadratic."""
    X = grid.points()
    k = grid.k
    L = rng.normal(size=(k, k))
    Q = L @ L.T * rng.uniform(0, 1)
    v = np.einsum("ij,jk,ik->i", X, Q, X)
    A = rng.normal(size=(int(rng.integers(1, 4)), k))
    c = rng.normal(size=A.shape[0])
    return v + np.max(X @ A.T + c, axis=1)


def monotone_values(rng, grid):
    """Cumulative sums of nonnegative increments along every axis."""
    v = rng.uniform(0, 1, size=grid.shape) * (rng.random(grid.shape) < 0.7)
    for ax in range(grid.k):
        v = np.cumsum(v, axis=ax)
    return v.ravel() + rng.normal()


def convex_monotone_values(rng, grid):
    """Max of affine pieces with nonnegative slopes plus increasing exponentials."""
    X = grid.points()
    A = rng.uniform(0, 1, size=(int(rng.integers(1, 4)), grid.k))
    c = rng.normal(size=A.shape[0])
    v = np.max(X @ A.T + c, axis=1)
    w = rng.uniform(0, 0.5, size=grid.k)
    return v + np.exp(X @ w)


def quasiconvex_values(rng, grid):
    """Increasing transform of a convex function."""
    v = convex_values(rng, grid)
    return np.tanh(v) if rng.random() < 0.5 else np.arctan(3 * v)


def quasiconvex_monotone_values(rng, grid):
    return np.tanh(convex_monotone_values(rng, grid) - 1.0)


def scale_into(v, lo, hi, rng):
    """Positive affine map of ``v`` into ``[lo, hi]`` (keeps convexity and order)."""
    span = np.ptp(v)
    a = rng.uniform(0.2, 1.0) * (hi - lo) / (span if span > 0 else 1.0)
    v = a * (v - v.min())
    return lo + v + rng.uniform(0, (hi - lo) - v.max())
