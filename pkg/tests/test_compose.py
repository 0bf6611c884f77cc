import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapeforce import compose
from shapeforce.compose import (
    ConvexStep,
    MonotoneStep,
    OperatorSpec,
    OrderError,
    RangeStep,
    Transform,
    TransformDomain,
    check_shape,
    get_transform,
    parse_op,
)
from shapeforce.convex import concavify, convexify
from shapeforce.core import FunctionSample, Malformed, RectGrid
from shapeforce.rearrange import rearrange_multi

from shapes import equi_grid, random_shape

G3 = RectGrid([[0, 0.5, 1]])


def figure_sample():
    g = RectGrid([np.linspace(0, 1, 21)])
    x = g.axes[0]
    return FunctionSample(g, (10 * np.exp(1.5 * x) - np.floor(10 * x + 1e-9) - 10) / 25)


class TestParse:
    @pytest.mark.parametrize("text,name", [
        ("m", "M"), ("cm", "CM"), ("c-m", "C-M"), ("c-m-", "C-M-"), ("qm", "QM"),
        ("q-", "Q-"), ("original", "original"), ("CMR", "CMR"),
    ])
    def test_names(self, text, name):
        assert str(parse_op(text, bounds="0,1")) == name

    def test_pipeline_is_innermost_first(self):
        spec = parse_op("cmr", bounds="0,1")
        assert [type(s) for s in spec.pipeline] == [RangeStep, MonotoneStep, ConvexStep]

    @pytest.mark.parametrize("text", ["mc", "rm", "cq", "qc", "mm", "rc"])
    def test_order_rejected(self, text):
        with pytest.raises(OrderError):
            parse_op(text, bounds="0,1")

    def test_range_needs_bounds_and_has_no_mirror(self):
        with pytest.raises(Malformed):
            parse_op("r")
        with pytest.raises(Malformed):
            parse_op("r-", bounds="0,1")

    def test_unknown_letter(self):
        with pytest.raises(Malformed):
            parse_op("cx")

    def test_transform_suffix(self):
        assert str(parse_op("c-", transform="log")) == "C-[log]"
        with pytest.raises(Malformed):
            get_transform("sqrt")


def test_cmr_figure_function():
    f = figure_sample()
    spec = parse_op("cmr", bounds="0.1,0.9")
    out = compose.apply(spec, f)
    assert check_shape(spec, out).passed
    assert out.values.min() >= 0.1 and out.values.max() <= 0.9
    assert np.all(np.diff(out.values) >= 0)
    # built as C(M(R f)); R f is already nondecreasing here
    r = np.clip(f.values, 0.1, 0.9)
    np.testing.assert_allclose(out.values, convexify(f.with_values(r)).values, atol=1e-12)


def test_concave_increasing_invariance():
    g = equi_grid([9])
    f = FunctionSample(g, np.sqrt(g.axes[0] + 0.1))
    np.testing.assert_array_equal(compose.apply(parse_op("c-m"), f).values, f.values)


def test_log_concavity():
    rng = np.random.default_rng(0)
    g = equi_grid([4, 4])
    f = FunctionSample(g, np.exp(rng.normal(size=g.size)))
    out = compose.apply(parse_op("c-", transform="log"), f)
    ref = np.exp(concavify(f.with_values(np.log(f.values))).values)
    np.testing.assert_allclose(out.values, ref, rtol=1e-12)


def test_transform_domain():
    f = FunctionSample(G3, [1.0, 0.0, 2.0])
    with pytest.raises(TransformDomain, match=r"\(0.5\)"):
        compose.apply(parse_op("c", transform="log"), f)
    with pytest.raises(TransformDomain):
        compose.apply(parse_op("m", transform="logit"), FunctionSample(G3, [0.2, 1.0, 0.5]))
    report = check_shape(parse_op("c", transform="log"), f)
    assert not report.passed


def test_range_bounds_mapped_through_transform():
    f = FunctionSample(G3, [0.05, 2.0, 0.5])
    spec = parse_op("r", bounds="0.1,1", transform="log")
    np.testing.assert_allclose(compose.apply(spec, f).values, [0.1, 1.0, 0.5])
    # bounds partly outside the open domain become one-sided
    spec = parse_op("r", bounds="-1,1", transform="log")
    np.testing.assert_allclose(compose.apply(spec, f).values, [0.05, 1.0, 0.5])
    with pytest.raises(TransformDomain):
        compose.apply(parse_op("r", bounds="-2,-1", transform="log"), f)


def test_tabulated_transform():
    h = Transform.tabulated([0, 1, 2], [0, 2, 3])
    f = FunctionSample(G3, [0.5, 1.5, 0.2])
    out = compose.apply(OperatorSpec(parse_op("m").pipeline, h), f)
    assert np.all(np.diff(out.values) >= 0)
    dec = Transform.tabulated([0, 1, 2], [3, 1, 0])
    out = compose.apply(OperatorSpec(parse_op("m").pipeline, dec), f)
    assert np.all(np.diff(out.values) <= 0)  # nondecreasing in h(f) means nonincreasing in f
    for y, h in [([0, 0], [1, 2]), ([0, 1, 2], [0, 1, 0]), ([0, 1], [1, 1]), ([0], [1])]:
        with pytest.raises(Malformed):
            Transform.tabulated(y, h)


def test_check_shape_examples():
    dec = FunctionSample(G3, [2.0, 1.0, 0.0])
    r = check_shape(parse_op("m"), dec)
    assert not r.passed and r.max_violation == pytest.approx(1.0)
    tent = FunctionSample(G3, [0.0, 1.0, 0.0])
    r = check_shape(parse_op("c"), tent)
    assert not r.passed and r.max_violation == pytest.approx(1.0)
    assert check_shape(parse_op("original"), tent).passed
    assert "no restrictions" in str(check_shape(parse_op("original"), tent))
    r = check_shape(parse_op("r", bounds="0,0.5"), tent)
    assert r.max_violation == pytest.approx(0.5)


def test_mc_order_breaks_convexity():
    f = FunctionSample(G3, [1.0, 0.0, 1.0])
    mc = rearrange_multi(convexify(f))
    np.testing.assert_array_equal(mc.values, [0, 1, 1])
    assert not check_shape(parse_op("c"), mc).passed
    assert check_shape(parse_op("cm"), compose.apply(parse_op("cm"), f)).passed


ALL_OPS = ["r", "m", "m-", "c", "c-", "q", "q-", "cm", "c-m", "cm-", "c-m-", "qm", "q-m",
           "qm-", "q-m-", "cr", "c-r", "mr", "m-r", "qr", "q-r", "cmr", "c-m-r", "qmr", "q-m-r"]


@given(st.integers(0, 2**32 - 1), st.sampled_from(ALL_OPS))
def test_output_passes_check(seed, op):
    rng = np.random.default_rng(seed)
    g = equi_grid(random_shape(rng, max_total=27))
    f = FunctionSample(g, rng.normal(size=g.size))
    spec = parse_op(op, bounds="-0.5,0.7")
    out = compose.apply(spec, f)
    rep = check_shape(spec, out)
    assert rep.passed, str(rep)
    assert math.isfinite(rep.max_violation)


def test_describe_mentions_transform():
    d = parse_op("c-", transform="log").describe()
    assert d.startswith("log^-1") and "concave" in d
