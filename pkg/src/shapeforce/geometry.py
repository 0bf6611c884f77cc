"""Convex-hull membership by linear feasibility."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import Malformed
from .lp import FEAS_TOL, _max_iter, _two_phase


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        if p.ndim == 1:
            p = p[:, None]
        if p.ndim != 2 or p.shape[0] == 0:
            raise Malformed("a point set needs at least one k-dimensional point")
        object.__setattr__(self, "points", p)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@njit(cache=True)
def _in_hull(P, x, tol, max_iter):
    n, k = P.shape
    # cheap exact answers before the LP
    for j in range(k):
        lo = P[0, j]
        hi = P[0, j]
        for i in range(1, n):
            lo = min(lo, P[i, j])
            hi = max(hi, P[i, j])
        if x[j] < lo - tol or x[j] > hi + tol:
            return False
    if k == 1:
        return True
    for i in range(n):
        hit = True
        for j in range(k):
            if abs(P[i, j] - x[j]) > tol:
                hit = False
                break
        if hit:
            return True
    A = np.empty((k + 1, n))
    for i in range(n):
        A[0, i] = 1.0
        for j in range(k):
            A[j + 1, i] = P[i, j] - x[j]
    b = np.zeros(k + 1)
    b[0] = 1.0
    code, _ = _two_phase(A, b, np.zeros(n), -np.ones(k + 1, dtype=np.int64), tol, max_iter)
    return code == 0


def in_convex_hull(x, S, tol: float = FEAS_TOL) -> bool:
    """Whether ``x`` is a convex combination of the points in ``S``.

    Decided by feasibility of ``a >= 0, sum(a) = 1, sum(a_j s_j) = x``.
    Points within ``tol`` of the hull boundary count as members.
    """
    P = S.points if isinstance(S, PointSet) else PointSet(S).points
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size != P.shape[1]:
        raise Malformed(f"query has dimension {x.size}, point set has {P.shape[1]}")
    return bool(_in_hull(np.ascontiguousarray(P), x, tol, _max_iter(*P.shape)))
