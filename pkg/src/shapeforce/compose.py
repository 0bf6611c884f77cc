"""Composite shape operators.

An :class:`OperatorSpec` is a short pipeline of primitive steps applied
innermost first in the fixed order range -> monotone -> (convex | quasi-convex),
optionally wrapped in a strictly monotone value transform ``h`` so that the
pipeline acts on ``h(f)`` and the result is mapped back with ``h^-1``.

Each step carries a sign; a negative sign applies the mirrored operator
``-O(-f)``, which turns convex into concave, nondecreasing into
nonincreasing, and so on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .convex import convexify
from .core import FunctionSample, Malformed, ShapeError, point_str
from .quasiconvex import quasiconvexify
from .range_op import RangeBounds, clip_values
from .rearrange import MonotoneOpChoice, PermutationSet, monotone

CHECK_TOL = 1e-7


class OrderError(ShapeError):
    pass


class TransformDomain(ShapeError):
    pass


def _sign(s) -> int:
    if s in (1, "+"):
        return 1
    if s in (-1, "-"):
        return -1
    raise Malformed(f"sign must be + or -, got {s!r}")


def _suffix(sign: int) -> str:
    return "-" if sign < 0 else ""


@dataclass(frozen=True)
class RangeStep:
    bounds: RangeBounds
    rank = 0

    def apply(self, f: FunctionSample, bounds: Optional[RangeBounds] = None) -> FunctionSample:
        return f.with_values(clip_values(f.values, bounds or self.bounds))

    def violation(self, f: FunctionSample) -> float:
        v = f.values
        return float(max(0.0, np.max(self.bounds.lo - v), np.max(v - self.bounds.hi)))

    def label(self) -> str:
        return "R"

    def describe(self) -> str:
        return f"range{self.bounds}"


@dataclass(frozen=True)
class MonotoneStep:
    sign: int = 1
    choice: MonotoneOpChoice = field(default_factory=MonotoneOpChoice)
    perms: Union[str, PermutationSet, None] = None
    seed: int = 0
    rank = 1

    def __post_init__(self):
        object.__setattr__(self, "sign", _sign(self.sign))

    def resolve_perms(self, k: int) -> PermutationSet:
        if isinstance(self.perms, PermutationSet):
            return self.perms
        if self.perms is None:
            return PermutationSet.default(k, self.seed)
        return PermutationSet.parse(self.perms, k, self.seed)

    def _op(self, f: FunctionSample) -> FunctionSample:
        return monotone(f, self.choice, self.resolve_perms(f.grid.k), self.seed)

    def apply(self, f: FunctionSample) -> FunctionSample:
        if self.sign > 0:
            return self._op(f)
        return -self._op(-f)

    def violation(self, f: FunctionSample) -> float:
        arr = self.sign * f.as_array()
        worst = 0.0
        for j in range(arr.ndim):
            d = np.diff(arr, axis=j)
            if d.size:
                worst = max(worst, float(-d.min()))
        return worst

    def label(self) -> str:
        return "M" + _suffix(self.sign)

    def describe(self) -> str:
        direction = "nonincreasing" if self.sign < 0 else "nondecreasing"
        return f"monotone[{direction}, {self.choice}]"


@dataclass(frozen=True)
class ConvexStep:
    sign: int = 1
    rank = 2

    def __post_init__(self):
        object.__setattr__(self, "sign", _sign(self.sign))

    def apply(self, f: FunctionSample) -> FunctionSample:
        if self.sign > 0:
            return convexify(f)
        return -convexify(-f)

    def violation(self, f: FunctionSample) -> float:
        v = self.sign * f.values
        return float(max(0.0, np.max(v - convexify(f.with_values(v)).values)))

    def label(self) -> str:
        return "C" + _suffix(self.sign)

    def describe(self) -> str:
        return "concave" if self.sign < 0 else "convex"


@dataclass(frozen=True)
class QuasiconvexStep:
    sign: int = 1
    rank = 2

    def __post_init__(self):
        object.__setattr__(self, "sign", _sign(self.sign))

    def apply(self, f: FunctionSample) -> FunctionSample:
        if self.sign > 0:
            return quasiconvexify(f)
        return -quasiconvexify(-f)

    def violation(self, f: FunctionSample) -> float:
        v = self.sign * f.values
        return float(max(0.0, np.max(v - quasiconvexify(f.with_values(v)).values)))

    def label(self) -> str:
        return "Q" + _suffix(self.sign)

    def describe(self) -> str:
        return "quasi-concave" if self.sign < 0 else "quasi-convex"


Step = Union[RangeStep, MonotoneStep, ConvexStep, QuasiconvexStep]


@dataclass(frozen=True)
class Transform:
    """Strictly monotone value map ``h`` with inverse, defined on ``(lo, hi)``."""

    name: str
    forward: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    lo: float = -math.inf
    hi: float = math.inf
    closed: bool = False
    increasing: bool = True

    def check_domain(self, values: np.ndarray, points: Optional[np.ndarray] = None) -> None:
        if self.closed:
            bad = (values < self.lo) | (values > self.hi)
        else:
            bad = (values <= self.lo) | (values >= self.hi)
        if np.any(bad):
            i = int(np.argmax(bad))
            where = f"grid point {point_str(points[i])}" if points is not None else f"index {i}"
            raise TransformDomain(
                f"{self.name} transform needs values in "
                f"{'[' if self.closed else '('}{self.lo:g}, {self.hi:g}"
                f"{']' if self.closed else ')'}; got {values[i]:g} at {where}"
            )

    def map_bounds(self, bounds: RangeBounds) -> RangeBounds:
        """Range bounds on the original scale carried to the transformed scale."""

        def fwd(v: float) -> float:
            if self.closed:
                v = min(max(v, self.lo), self.hi)
            elif v <= self.lo:
                return -math.inf if self.increasing else math.inf
            elif v >= self.hi:
                return math.inf if self.increasing else -math.inf
            return float(self.forward(np.array([v]))[0])

        a, b = fwd(bounds.lo), fwd(bounds.hi)
        if not self.increasing:
            a, b = b, a
        if a == math.inf or b == -math.inf:
            raise TransformDomain(f"range {bounds} lies outside the {self.name} domain")
        return RangeBounds(a, b)

    @classmethod
    def tabulated(cls, y, h, name: str = "tabulated") -> "Transform":
        """Piecewise-linear ``h`` through the points ``(y_i, h_i)``."""
        y = np.asarray(y, dtype=float)
        h = np.asarray(h, dtype=float)
        if y.size < 2 or y.shape != h.shape:
            raise Malformed("tabulated transform needs matching arrays of >= 2 points")
        if np.any(np.diff(y) <= 0):
            raise Malformed("tabulated transform abscissae must be strictly increasing")
        dh = np.diff(h)
        if np.all(dh > 0):
            increasing = True
        elif np.all(dh < 0):
            increasing = False
        else:
            raise Malformed("tabulated transform must be strictly monotone")
        hs, ys = (h, y) if increasing else (h[::-1], y[::-1])
        return cls(
            name,
            lambda v: np.interp(v, y, h),
            lambda u: np.interp(u, hs, ys),
            float(y[0]), float(y[-1]), closed=True, increasing=increasing,
        )


def _logit(p):
    return np.log(p) - np.log1p(-p)


def _expit(u):
    return 0.5 * (1.0 + np.tanh(0.5 * u))


TRANSFORMS = {
    "identity": Transform("identity", lambda v: v, lambda u: u),
    "log": Transform("log", np.log, np.exp, lo=0.0),
    "logit": Transform("logit", _logit, _expit, lo=0.0, hi=1.0),
}


def get_transform(name: Union[str, Transform, None]) -> Transform:
    if name is None:
        return TRANSFORMS["identity"]
    if isinstance(name, Transform):
        return name
    try:
        return TRANSFORMS[name]
    except KeyError:
        raise Malformed(f"unknown transform {name!r}; choose from {sorted(TRANSFORMS)}") from None


@dataclass(frozen=True)
class OperatorSpec:
    """Pipeline of steps in application order (innermost first) plus a transform."""

    pipeline: tuple = ()
    transform: Transform = field(default_factory=lambda: TRANSFORMS["identity"])

    def __post_init__(self):
        steps = tuple(self.pipeline)
        object.__setattr__(self, "pipeline", steps)
        object.__setattr__(self, "transform", get_transform(self.transform))
        for prev, nxt in zip(steps, steps[1:]):
            if nxt.rank == prev.rank:
                raise OrderError(
                    f"{prev.label()} and {nxt.label()} cannot both appear: at most one "
                    "range, one monotone and one convex or quasi-convex step"
                )
            if nxt.rank < prev.rank:
                raise OrderError(
                    f"{nxt.label()} applied after {prev.label()}: steps must run range, "
                    "then monotone, then convex/quasi-convex; other orders can undo "
                    "an earlier restriction (rearranging a convex function need not "
                    "stay convex)"
                )

    @property
    def is_identity(self) -> bool:
        return not self.pipeline

    def __str__(self) -> str:
        if not self.pipeline:
            name = "original"
        else:
            name = "".join(s.label() for s in reversed(self.pipeline))
        if self.transform.name != "identity":
            name += f"[{self.transform.name}]"
        return name

    def describe(self) -> str:
        parts = [s.describe() for s in self.pipeline] or ["identity"]
        out = " -> ".join(parts)
        if self.transform.name != "identity":
            out = f"{self.transform.name}^-1 . ({out}) . {self.transform.name}"
        return out


def parse_op(
    text: str,
    bounds: Union[RangeBounds, str, None] = None,
    choice: Union[MonotoneOpChoice, str, None] = None,
    perms: Union[str, PermutationSet, None] = None,
    seed: int = 0,
    transform: Union[str, Transform, None] = None,
) -> OperatorSpec:
    """Parse a compact operator name such as ``"cmr"``, ``"c-m"`` or ``"q-m-"``.

    Letters are written outermost first, as in ``C o M o R``; a ``-`` after a
    letter selects its mirrored version. ``"original"`` is the identity.
    """
    t = text.strip().lower()
    if isinstance(bounds, str):
        bounds = RangeBounds.parse(bounds)
    if isinstance(choice, str):
        choice = MonotoneOpChoice.parse(choice)
    if t in ("original", "id", "identity", ""):
        return OperatorSpec((), transform)
    steps = []
    i = 0
    while i < len(t):
        letter = t[i]
        i += 1
        sign = 1
        if i < len(t) and t[i] == "-":
            sign = -1
            i += 1
        if letter == "r":
            if sign < 0:
                raise Malformed("the range step has no mirrored version")
            if bounds is None:
                raise Malformed(f"operator {text!r} has a range step but no bounds were given")
            steps.append(RangeStep(bounds))
        elif letter == "m":
            steps.append(MonotoneStep(sign, choice or MonotoneOpChoice(), perms, seed))
        elif letter == "c":
            steps.append(ConvexStep(sign))
        elif letter == "q":
            steps.append(QuasiconvexStep(sign))
        else:
            raise Malformed(f"unknown operator letter {letter!r} in {text!r}")
    return OperatorSpec(tuple(reversed(steps)), transform)


def apply(spec: OperatorSpec, f: FunctionSample) -> FunctionSample:
    """Run the pipeline of ``spec`` on ``f``."""
    h = spec.transform
    identity = h.name == "identity"
    if identity:
        g = f
    else:
        h.check_domain(f.values, f.grid.points())
        with np.errstate(divide="ignore"):
            g = f.with_values(h.forward(f.values))
    for step in spec.pipeline:
        if isinstance(step, RangeStep) and not identity:
            g = step.apply(g, h.map_bounds(step.bounds))
        else:
            g = step.apply(g)
    if identity:
        return g
    return f.with_values(h.inverse(g.values))


@dataclass(frozen=True)
class StepCheck:
    name: str
    passed: bool
    violation: float


@dataclass(frozen=True)
class ShapeReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_violation(self) -> float:
        return max((c.violation for c in self.checks), default=0.0)

    def __str__(self) -> str:
        lines = [
            f"{c.name:<24} {'ok' if c.passed else 'FAIL'}  max violation {c.violation:.3g}"
            for c in self.checks
        ]
        return "\n".join(lines) if lines else "(no restrictions)"


def check_shape(spec: OperatorSpec, f: FunctionSample, tol: float = CHECK_TOL) -> ShapeReport:
    """Check ``f`` against every restriction in ``spec``, reporting the worst violation."""
    h = spec.transform
    checks = []
    g = f
    if h.name != "identity":
        try:
            h.check_domain(f.values, f.grid.points())
        except TransformDomain:
            return ShapeReport((StepCheck(f"{h.name} domain", False, math.inf),))
        with np.errstate(divide="ignore"):
            g = f.with_values(h.forward(f.values))
    for step in spec.pipeline:
        v = step.violation(f if isinstance(step, RangeStep) else g)
        checks.append(StepCheck(step.describe(), v <= tol, v))
    return ShapeReport(tuple(checks))
