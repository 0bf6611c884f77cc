import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapeforce.convex import (
    concavify,
    convexify,
    convexify_lp,
    dlf_at_point,
    dlf_on_points,
    gcm_1d,
    lower_hull_1d,
)
from shapeforce.core import SUP, FunctionSample, Malformed, RectGrid, distance, leq
from shapeforce.lp import SolverError
from shapeforce.oracles import brute_force_dlf

from shapes import convex_values, equi_grid, monotone_values, random_shape

G3 = RectGrid([[0, 0.5, 1]])


def figure_function(x):
    return (10 * np.exp(1.5 * x) - np.floor(10 * x + 1e-9) - 10) / 25


def test_figure_function_point():
    g = RectGrid([np.linspace(0, 1, 21)])
    f = FunctionSample(g, figure_function(g.axes[0]))
    out = gcm_1d(f)
    assert out.values[1] == pytest.approx(0.01236685, abs=1e-8)
    assert out.values[1] == pytest.approx((f.values[0] + f.values[2]) / 2, abs=1e-15)
    np.testing.assert_allclose(out.values[::2], f.values[::2], atol=1e-15)


def test_convex_unchanged_and_tent_flattened():
    np.testing.assert_array_equal(convexify(FunctionSample(G3, [1, 0, 1])).values, [1, 0, 1])
    np.testing.assert_array_equal(convexify(FunctionSample(G3, [0, 1, 0])).values, [0, 0, 0])


def test_lower_hull_drops_collinear():
    x = np.array([0.0, 1, 2, 3])
    assert list(lower_hull_1d(x, np.array([0.0, 1, 2, 0]))) == [0, 3]
    assert list(lower_hull_1d(x, x.copy())) == [0, 3]


def test_bilinear_corner():
    g = equi_grid([3, 3])
    f = FunctionSample.from_function(g, lambda X: X[:, 0] * X[:, 1])
    assert dlf_at_point(f, (0.5, 0.5)) == pytest.approx(0.0, abs=1e-12)
    corners = FunctionSample(RectGrid([[0, 1], [0, 1]]), [0, 0, 0, 1])
    assert dlf_on_points(corners.grid.points(), corners.values, [0.5, 0.5]) == pytest.approx(0.0)
    np.testing.assert_allclose(convexify(f).as_array(), np.maximum(0, g.points().sum(1) - 1).reshape(3, 3),
                               atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_affine_is_fixed(seed):
    rng = np.random.default_rng(seed)
    g = equi_grid(random_shape(rng))
    b = rng.normal(size=g.k)
    f = FunctionSample.from_function(g, lambda X: 0.3 + X @ b)
    for x in g.points()[:: max(1, g.size // 5)]:
        assert dlf_at_point(f, x) == pytest.approx(f.values[g.index_of(x)], abs=1e-9)


def test_off_grid_and_outside_hull():
    f = FunctionSample(G3, [0, 1, 0])
    with pytest.raises(Malformed):
        dlf_at_point(f, 0.3)
    with pytest.raises(SolverError):
        dlf_on_points(np.array([[0.0], [1.0]]), np.zeros(2), [2.0])


def test_concavify_examples():
    np.testing.assert_array_equal(concavify(FunctionSample(G3, [1, 0, 1])).values, [1, 1, 1])
    np.testing.assert_array_equal(concavify(FunctionSample(G3, [0, 1, 0])).values, [0, 1, 0])


@given(st.integers(0, 2**32 - 1))
def test_lp_path_matches_hull_in_1d(seed):
    rng = np.random.default_rng(seed)
    x = np.cumsum(rng.uniform(0.1, 1, size=int(rng.integers(2, 15))))
    f = FunctionSample(RectGrid([x]), rng.normal(size=x.size))
    np.testing.assert_allclose(convexify_lp(f).values, gcm_1d(f).values, atol=1e-9)


@given(st.integers(0, 2**32 - 1))
def test_matches_brute_force_on_small_grids(seed):
    rng = np.random.default_rng(seed)
    g = equi_grid(random_shape(rng, k=int(rng.integers(1, 3)), max_total=9))
    f = FunctionSample(g, rng.normal(size=g.size))
    out = convexify(f)
    pts = g.points()
    ref = [min(brute_force_dlf(pts, f.values, p), f.values[i]) for i, p in enumerate(pts)]
    np.testing.assert_allclose(out.values, ref, atol=1e-9)


@given(st.integers(0, 2**32 - 1))
def test_axioms(seed):
    rng = np.random.default_rng(seed)
    g = equi_grid(random_shape(rng))
    f = FunctionSample(g, rng.normal(size=g.size))
    h = FunctionSample(g, f.values + rng.uniform(0, 1, size=g.size))
    cf, ch = convexify(f), convexify(h)
    # minorant, self-minorant (convex), idempotent
    assert leq(cf, f, 1e-9)
    assert distance(convexify(cf), cf) <= 1e-7
    assert leq(cf, ch, 1e-9)
    k = FunctionSample(g, rng.normal(size=g.size))
    assert distance(cf, convexify(k), SUP) <= distance(f, k, SUP) + 1e-9
    # invariance on convex samples
    c = FunctionSample(g, convex_values(rng, g))
    assert distance(convexify(c), c) <= 1e-7


@given(st.integers(0, 2**32 - 1))
def test_faces_and_vertices_of_rectangle(seed):
    rng = np.random.default_rng(seed)
    g = RectGrid([np.sort(rng.choice(np.arange(10.0), int(rng.integers(2, 6)), replace=False)),
                  np.linspace(0, 1, int(rng.integers(2, 6)))])
    f = FunctionSample(g, rng.normal(size=g.size))
    out = convexify(f).as_array()
    a = f.as_array()
    for i in (0, -1):
        for j in (0, -1):
            assert out[i, j] == pytest.approx(a[i, j], abs=1e-9)
    for i in (0, -1):
        edge = FunctionSample(RectGrid([g.axes[1]]), a[i, :])
        np.testing.assert_allclose(out[i, :], gcm_1d(edge).values, atol=1e-9)
        edge = FunctionSample(RectGrid([g.axes[0]]), a[:, i])
        np.testing.assert_allclose(out[:, i], gcm_1d(edge).values, atol=1e-9)


@given(st.integers(0, 2**32 - 1))
def test_preserves_monotonicity(seed):
    rng = np.random.default_rng(seed)
    g = equi_grid(random_shape(rng, k=2))
    out = convexify(FunctionSample(g, monotone_values(rng, g))).as_array()
    for ax in range(2):
        assert np.diff(out, axis=ax).min() >= -1e-9
