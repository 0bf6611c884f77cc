"""Dense two-phase primal simplex for small linear programs.

Problems are stated as ``maximize c.z  s.t.  A z <= b`` where the rows listed
in ``equality_rows`` hold with equality and each variable is either free or
nonnegative. Internally the program is moved to standard form
(``min c'.u, A'u = b', u >= 0, b' >= 0``) and solved on a full tableau.

Pricing is Dantzig's largest-coefficient rule; after a run of degenerate
pivots the solver switches permanently to Bland's smallest-index rule, which
cannot cycle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numba import njit

from .core import Malformed, ShapeError

FEAS_TOL = 1e-9
OBJ_TOL = 1e-7
_PIVOT_TOL = 1e-11
_COST_TOL = 1e-11
_DEGENERATE_RUN = 30


class SolverError(ShapeError):
    pass


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """``maximize objective.z`` subject to ``A z <= b`` (``=`` on equality rows)."""

    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray
    free: np.ndarray = None
    equality_rows: tuple = ()

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).ravel()
        if A.shape[0] == 0:
            raise Malformed("a linear program needs at least one constraint row")
        if A.shape != (b.size, c.size):
            raise Malformed(
                f"A has shape {A.shape}, expected ({b.size}, {c.size}) from b and c"
            )
        free = self.free
        if free is None:
            free = np.zeros(c.size, dtype=bool)
        free = np.asarray(free, dtype=bool).ravel()
        if free.size != c.size:
            raise Malformed("one FREE/NONNEGATIVE flag per variable is required")
        eq = tuple(sorted(set(int(i) for i in self.equality_rows)))
        if eq and (eq[0] < 0 or eq[-1] >= b.size):
            raise Malformed("equality row index out of range")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise Malformed("LP data must be finite")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "equality_rows", eq)

    @property
    def n_vars(self) -> int:
        return self.objective.size


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    z: Optional[np.ndarray] = field(default=None, repr=False)
    objective_value: float = float("nan")


@njit(cache=True)
def _pivot(T, basis, r, j):
    T[r, :] /= T[r, j]
    for i in range(T.shape[0]):
        if i != r:
            a = T[i, j]
            if a != 0.0:
                T[i, :] -= a * T[r, :]
    basis[r] = j


@njit(cache=True)
def _run_simplex(T, basis, n_enter, max_iter):
    """Minimise over the tableau ``T`` in place.

    The last row holds reduced costs and, in its last entry, minus the
    objective value. Only columns ``< n_enter`` may enter the basis.
    Returns 0 (optimal), 1 (unbounded) or 2 (iteration limit).
    """
    m = T.shape[0] - 1
    rhs = T.shape[1] - 1
    bland = False
    degenerate = 0
    for _ in range(max_iter):
        j = -1
        if bland:
            for c in range(n_enter):
                if T[m, c] < -_COST_TOL:
                    j = c
                    break
        else:
            best = -_COST_TOL
            for c in range(n_enter):
                if T[m, c] < best:
                    best = T[m, c]
                    j = c
        if j < 0:
            return 0
        r = -1
        best_ratio = np.inf
        for i in range(m):
            a = T[i, j]
            if a > _PIVOT_TOL:
                ratio = T[i, rhs] / a
                if ratio < best_ratio - 1e-14 or (
                    ratio <= best_ratio + 1e-14 and r >= 0 and basis[i] < basis[r]
                ):
                    best_ratio = ratio
                    r = i
        if r < 0:
            return 1
        if best_ratio <= 1e-14:
            degenerate += 1
            if degenerate > _DEGENERATE_RUN:
                bland = True
        else:
            degenerate = 0
        _pivot(T, basis, r, j)
    return 2


def _max_iter(m: int, n: int) -> int:
    return 50 * (m + n) + 1000


@njit(cache=True)
def _two_phase(A, b, c, slack_basis, feas_tol, max_iter):
    """Numba kernel behind :func:`_solve_standard`.

    Returns ``(code, u)`` with code 0 optimal, 1 unbounded, 2 iteration limit
    in phase one, 3 infeasible, 4 iteration limit in phase two.
    """
    m, n = A.shape
    n_art = 0
    for i in range(m):
        if slack_basis[i] < 0:
            n_art += 1
    T = np.zeros((m + 1, n + n_art + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    basis = np.empty(m, dtype=np.int64)
    a = 0
    for i in range(m):
        if slack_basis[i] < 0:
            T[i, n + a] = 1.0
            basis[i] = n + a
            a += 1
        else:
            basis[i] = slack_basis[i]
    u = np.zeros(n)

    if n_art > 0:
        # phase one: minimise the sum of artificials
        for j in range(n, n + n_art):
            T[m, j] = 1.0
        for i in range(m):
            if basis[i] >= n:
                T[m, :] -= T[i, :]
        code = _run_simplex(T, basis, n + n_art, max_iter)
        if code == 2:
            return 2, u
        scale = 1.0
        for i in range(m):
            scale = max(scale, abs(b[i]))
        if -T[m, -1] > feas_tol * scale:
            return 3, u
        # drive artificials out of the basis; rows where that is impossible
        # are redundant and keep a zero-valued artificial that never moves
        for i in range(m):
            if basis[i] >= n:
                j_best = -1
                v_best = 1e-9
                for j in range(n):
                    if abs(T[i, j]) > v_best:
                        v_best = abs(T[i, j])
                        j_best = j
                if j_best >= 0:
                    _pivot(T, basis, i, j_best)

    # phase two; artificials may not re-enter
    T[m, :] = 0.0
    T[m, :n] = c
    for i in range(m):
        if basis[i] < n:
            cb = c[basis[i]]
            if cb != 0.0:
                T[m, :] -= cb * T[i, :]
    code = _run_simplex(T, basis, n, max_iter)
    if code == 2:
        return 4, u
    if code == 1:
        return 1, u
    for i in range(m):
        if basis[i] < n:
            u[basis[i]] = T[i, -1]
    return 0, u


def _solve_standard(A: np.ndarray, b: np.ndarray, c: np.ndarray, slack_basis: np.ndarray):
    """Two-phase simplex on ``min c.u, A u = b, u >= 0`` with ``b >= 0``.

    ``slack_basis[i]`` is a column that is the unit vector ``e_i`` (or -1 when
    row ``i`` needs an artificial variable).

    Returns ``(status, u)``.
    """
    m, n = A.shape
    code, u = _two_phase(
        np.ascontiguousarray(A, dtype=np.float64),
        np.ascontiguousarray(b, dtype=np.float64),
        np.ascontiguousarray(c, dtype=np.float64),
        np.ascontiguousarray(slack_basis, dtype=np.int64),
        FEAS_TOL,
        _max_iter(m, n),
    )
    if code == 0:
        return LpStatus.OPTIMAL, u
    if code == 1:
        return LpStatus.UNBOUNDED, None
    if code == 3:
        return LpStatus.INFEASIBLE, None
    raise SolverError(f"simplex iteration limit reached in phase {'one' if code == 2 else 'two'}")


def _to_standard(lp: LinearProgram, with_objective: bool = True):
    A, b = lp.A, lp.b
    m, nv = A.shape
    eq = np.zeros(m, dtype=bool)
    eq[list(lp.equality_rows)] = True

    # variable columns: z = P u_var, free variables split as u+ - u-
    free_idx = np.flatnonzero(lp.free)
    cols = [A, -A[:, free_idx]]
    n_var_cols = nv + free_idx.size
    ineq = np.flatnonzero(~eq)
    S = np.zeros((m, ineq.size))
    S[ineq, np.arange(ineq.size)] = 1.0
    Astd = np.hstack(cols + [S])
    bstd = b.copy()
    neg = bstd < 0
    Astd[neg] *= -1.0
    bstd[neg] *= -1.0

    slack_basis = -np.ones(m, dtype=np.int64)
    for s, i in enumerate(ineq):
        if not neg[i]:
            slack_basis[i] = n_var_cols + s

    cstd = np.zeros(Astd.shape[1])
    if with_objective:
        c = lp.objective
        cstd[:nv] = -c
        cstd[nv:n_var_cols] = c[free_idx]

    def recover(u):
        z = u[:nv].copy()
        z[free_idx] -= u[nv:n_var_cols]
        return z

    return Astd, bstd, cstd, slack_basis, recover


def solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp``; the returned point satisfies every row to within 1e-9."""
    Astd, bstd, cstd, slack_basis, recover = _to_standard(lp)
    status, u = _solve_standard(Astd, bstd, cstd, slack_basis)
    if status is not LpStatus.OPTIMAL:
        return LpSolution(status)
    z = recover(u)
    return LpSolution(LpStatus.OPTIMAL, z, float(lp.objective @ z))


def feasible(
    A,
    b,
    equality_rows: Sequence[int] = (),
    nonnegative: bool = False,
) -> bool:
    """True iff ``A z <= b`` (``=`` on ``equality_rows``) has a solution.

    Variables are free unless ``nonnegative`` is set.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    lp = LinearProgram(
        np.zeros(A.shape[1]), A, b,
        free=np.full(A.shape[1], not nonnegative),
        equality_rows=tuple(equality_rows),
    )
    Astd, bstd, cstd, slack_basis, _ = _to_standard(lp, with_objective=False)
    if np.all(slack_basis >= 0):
        return True
    status, _ = _solve_standard(Astd, bstd, cstd, slack_basis)
    return status is LpStatus.OPTIMAL


def solve_simplex_weights(points: np.ndarray, values: np.ndarray, x: np.ndarray):
    """``min sum_i a_i values_i`` over weights ``a >= 0`` with ``sum a = 1`` and
    ``sum a_i points_i = x``.

    This is the LP dual of the supporting-hyperplane program
    ``max v s.t. v + xi.(points_i - x) <= values_i``; both have the same
    optimal value. Returns ``(status, value, weights)``.
    """
    n, k = points.shape
    A = np.empty((k + 1, n))
    A[0] = 1.0
    A[1:] = (points - x).T
    b = np.zeros(k + 1)
    b[0] = 1.0
    status, u = _solve_standard(A, b, np.asarray(values, dtype=float), -np.ones(k + 1, dtype=np.int64))
    if status is not LpStatus.OPTIMAL:
        return status, float("nan"), None
    return status, float(values @ u), u
