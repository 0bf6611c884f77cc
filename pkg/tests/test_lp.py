import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapeforce.core import Malformed
from shapeforce.lp import (
    FEAS_TOL,
    OBJ_TOL,
    LinearProgram,
    LpStatus,
    feasible,
    solve,
    solve_simplex_weights,
)


def test_bounded_single_variable():
    sol = solve(LinearProgram([1.0], [[1.0]], [3.0]))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective_value == pytest.approx(3.0)


def test_unbounded():
    sol = solve(LinearProgram([1.0], [[-1.0]], [0.0]))
    assert sol.status is LpStatus.UNBOUNDED


def test_infeasible():
    sol = solve(LinearProgram([1.0], [[1.0], [-1.0]], [1.0, -2.0], free=[True]))
    assert sol.status is LpStatus.INFEASIBLE


def test_tent_peak_supporting_line():
    # max v s.t. v + xi (x_i - 0.5) <= f(x_i), (v, xi) free
    x = np.array([0.0, 0.5, 1.0])
    f = np.array([0.0, 1.0, 0.0])
    A = np.column_stack([np.ones(3), x - 0.5])
    sol = solve(LinearProgram([1.0, 0.0], A, f, free=[True, True]))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.z[0] == pytest.approx(0.0, abs=1e-12)


def test_equality_rows_respected():
    # max z1 + z2 s.t. z1 + z2 <= 4, z1 - z2 = 1
    sol = solve(LinearProgram([1, 1], [[1, 1], [1, -1]], [4, 1], equality_rows=(1,)))
    assert sol.objective_value == pytest.approx(4)
    assert sol.z[0] - sol.z[1] == pytest.approx(1)


def test_cycling_instance_terminates():
    # Beale's degenerate example; Dantzig pricing with naive ties cycles on it
    A = [[0.25, -60, -1 / 25, 9], [0.5, -90, -1 / 50, 3], [0, 0, 1, 0]]
    sol = solve(LinearProgram([0.75, -150, 1 / 50, -6], A, [0, 0, 1]))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective_value == pytest.approx(0.05)


@pytest.mark.parametrize(
    "kw",
    [
        dict(objective=[1, 2], A=[[1.0]], b=[1.0]),
        dict(objective=[1], A=[[1.0]], b=[1.0, 2.0]),
        dict(objective=[1], A=np.zeros((0, 1)), b=[]),
        dict(objective=[1], A=[[1.0]], b=[1.0], free=[True, False]),
        dict(objective=[1], A=[[1.0]], b=[1.0], equality_rows=(3,)),
    ],
)
def test_malformed(kw):
    with pytest.raises(Malformed):
        LinearProgram(**kw)


def test_feasible_examples():
    assert not feasible([[1.0], [-1.0]], [1.0, -2.0])
    assert feasible([[1.0], [1.0], [-1.0]], [0.5, 1.0, 0.0], equality_rows=(0,))
    # redundant but consistent equalities
    assert feasible([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]], [1.0, 2.0, 3.0], equality_rows=(0, 1, 2))
    assert not feasible([[1.0, 1.0], [2.0, 2.0]], [1.0, 3.0], equality_rows=(0, 1))


def _vertex_enumeration(c, A, b, free):
    """Best vertex of {A z <= b, z_j >= 0 for non-free j} by brute force."""
    n = len(c)
    rows = [(A[i], b[i]) for i in range(len(b))]
    rows += [(-np.eye(n)[j], 0.0) for j in range(n) if not free[j]]
    G = np.array([r[0] for r in rows])
    h = np.array([r[1] for r in rows])
    best, any_feasible = -np.inf, False
    for sub in itertools.combinations(range(len(h)), n):
        M = G[list(sub)]
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        z = np.linalg.solve(M, h[list(sub)])
        if np.all(G @ z <= h + 1e-8):
            any_feasible = True
            best = max(best, float(c @ z))
    return any_feasible, best


@given(st.integers(0, 2**32 - 1))
def test_matches_vertex_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    m = int(rng.integers(1, 7))
    free = rng.random(n) < 0.3
    A = rng.normal(size=(m, n))
    b = rng.normal(size=m) + 0.5
    # box rows keep the program bounded so the optimum sits at a vertex
    A = np.vstack([A, np.eye(n), -np.eye(n)])
    b = np.concatenate([b, np.full(n, 3.0), np.full(n, 3.0)])
    c = rng.normal(size=n)
    sol = solve(LinearProgram(c, A, b, free=free))
    ok, best = _vertex_enumeration(c, A, b, free)
    if not ok:
        assert sol.status is LpStatus.INFEASIBLE
        return
    assert sol.status is LpStatus.OPTIMAL
    assert np.all(A @ sol.z <= b + FEAS_TOL * 10)
    assert np.all(sol.z[~free] >= -FEAS_TOL)
    assert sol.objective_value == pytest.approx(best, abs=1e-6)


def test_simplex_weights_land_on_query():
    rng = np.random.default_rng(3)
    P = rng.uniform(size=(12, 2))
    v = rng.normal(size=12)
    x = P[:3].mean(axis=0)
    status, value, w = solve_simplex_weights(P, v, x)
    assert status is LpStatus.OPTIMAL
    assert w.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(w @ P, x, atol=1e-9)
    assert value <= v[:3].mean() + OBJ_TOL


def test_simplex_weights_outside_hull_infeasible():
    P = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    status, _, _ = solve_simplex_weights(P, np.zeros(3), np.array([1.0, 1.0]))
    assert status is LpStatus.INFEASIBLE
