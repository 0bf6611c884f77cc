"""Grids, function samples, confidence bands and the distances between them.

Everything in the package works on a finite tensor-product grid. A
:class:`FunctionSample` holds the values of one function at every grid point
in row-major order (last axis fastest), so ``values.reshape(grid.shape)`` is
the natural array view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

LEQ_TOL = 1e-12
SUP = math.inf


class ShapeError(ValueError):
    """Base class for all errors raised by the package."""


class GridMismatch(ShapeError):
    pass


class Malformed(ShapeError):
    pass


class UnsupportedGrid(ShapeError):
    pass


class InvalidBand(ShapeError):
    pass


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def point_str(x) -> str:
    """``(0, 0.5)``-style rendering of a grid point for messages."""
    return "(" + ", ".join(f"{float(v):g}" for v in np.atleast_1d(x)) + ")"


@dataclass(frozen=True, eq=False)
class RectGrid:
    """Tensor-product grid ``axes[0] x axes[1] x ... x axes[k-1]``."""

    axes: tuple

    def __init__(self, axes: Sequence[Sequence[float]]):
        if len(axes) == 0:
            raise Malformed("a grid needs at least one axis")
        frozen = []
        for j, ax in enumerate(axes):
            a = np.array(ax, dtype=float).ravel()
            if a.size < 2:
                raise Malformed(f"axis {j} has {a.size} point(s); need at least 2")
            if not np.all(np.isfinite(a)):
                raise Malformed(f"axis {j} has non-finite coordinates")
            if np.any(np.diff(a) <= 0):
                raise Malformed(f"axis {j} is not strictly increasing")
            frozen.append(_freeze(a))
        object.__setattr__(self, "axes", tuple(frozen))

    @property
    def k(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple:
        return tuple(a.size for a in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def points(self) -> np.ndarray:
        """All grid points as an ``(n, k)`` array in row-major order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def index_of(self, x: Sequence[float], tol: float = 1e-9) -> int:
        """Flat index of grid point ``x``; raises :class:`Malformed` if off-grid."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.size != self.k:
            raise Malformed(f"point has dimension {x.size}, grid has {self.k}")
        idx = []
        for j, (a, xj) in enumerate(zip(self.axes, x)):
            i = int(np.argmin(np.abs(a - xj)))
            if abs(a[i] - xj) > tol:
                raise Malformed(f"coordinate {xj} is not on axis {j}")
            idx.append(i)
        return int(np.ravel_multi_index(tuple(idx), self.shape))

    def is_equispaced(self, axis: int, rtol: float = 1e-9) -> bool:
        d = np.diff(self.axes[axis])
        return bool(np.all(np.abs(d - d[0]) <= rtol * max(abs(d[0]), 1.0)))

    def cell_weights(self) -> np.ndarray:
        """Quadrature weights, one per grid point, summing to the rectangle volume.

        Each axis is split into cells around its points (boundary cells mirror
        their neighbour) and the cell lengths are rescaled to the axis extent.
        On an equispaced axis every point gets the same weight.
        """
        per_axis = []
        for a in self.axes:
            mids = (a[1:] + a[:-1]) / 2
            lo = a[0] - (mids[0] - a[0])
            hi = a[-1] + (a[-1] - mids[-1])
            edges = np.concatenate([[lo], mids, [hi]])
            w = np.diff(edges)
            per_axis.append(w * (a[-1] - a[0]) / w.sum())
        w = per_axis[0]
        for wa in per_axis[1:]:
            w = np.multiply.outer(w, wa)
        return np.asarray(w).ravel()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RectGrid):
            return NotImplemented
        return self.shape == other.shape and all(
            np.array_equal(a, b) for a, b in zip(self.axes, other.axes)
        )

    def __hash__(self) -> int:
        return hash(tuple(a.tobytes() for a in self.axes))

    def __repr__(self) -> str:
        return f"RectGrid(shape={self.shape})"


@dataclass(frozen=True, eq=False)
class FunctionSample:
    """Values of a function at every point of ``grid`` (row-major)."""

    grid: RectGrid
    values: np.ndarray = field(repr=False)

    def __init__(self, grid: RectGrid, values):
        v = np.array(values, dtype=float).ravel()
        if v.size != grid.size:
            raise Malformed(f"{v.size} values for a grid of {grid.size} points")
        if not np.all(np.isfinite(v)):
            raise Malformed("function values must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", _freeze(v))

    @classmethod
    def from_function(cls, grid: RectGrid, fn) -> "FunctionSample":
        """Evaluate ``fn`` on the ``(n, k)`` point array of ``grid``."""
        return cls(grid, fn(grid.points()))

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def with_values(self, values) -> "FunctionSample":
        return FunctionSample(self.grid, values)

    def __neg__(self) -> "FunctionSample":
        return negate(self)

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"FunctionSample(grid={self.grid!r}, values={self.values!r})"


@dataclass(frozen=True)
class Band:
    """Confidence band ``[lower, upper]`` on a shared grid."""

    lower: FunctionSample
    upper: FunctionSample

    def __post_init__(self):
        if self.lower.grid != self.upper.grid:
            raise GridMismatch("band endpoints live on different grids")
        if not leq(self.lower, self.upper):
            i = int(np.argmax(self.lower.values - self.upper.values))
            x = self.lower.grid.points()[i]
            raise InvalidBand(f"lower > upper at grid point {point_str(x)}")

    @property
    def grid(self) -> RectGrid:
        return self.lower.grid

    def width(self, p: float = SUP) -> float:
        return distance(self.lower, self.upper, p)


def _check_same_grid(f: FunctionSample, g: FunctionSample) -> None:
    if f.grid != g.grid:
        raise GridMismatch(f"grids differ: {f.grid!r} vs {g.grid!r}")


def check_norm_order(p: float) -> float:
    p = float(p)
    if not (p >= 1):
        raise Malformed(f"norm order must be >= 1 or SUP, got {p}")
    return p


def distance(f: FunctionSample, g: FunctionSample, p: float = SUP) -> float:
    """L^p distance between two samples; ``p=SUP`` (``math.inf``) is the max norm.

    Finite ``p`` uses the Riemann sum ``(sum_i w_i |f_i - g_i|^p)^(1/p)`` with
    the weights of :meth:`RectGrid.cell_weights`.
    """
    _check_same_grid(f, g)
    p = check_norm_order(p)
    d = np.abs(f.values - g.values)
    if math.isinf(p):
        return float(d.max())
    w = f.grid.cell_weights()
    return float(np.sum(w * d**p) ** (1.0 / p))


def leq(f: FunctionSample, g: FunctionSample, tol: float = LEQ_TOL) -> bool:
    """Pointwise ``f <= g`` up to an absolute tolerance."""
    _check_same_grid(f, g)
    return bool(np.all(f.values <= g.values + tol))


def negate(f: FunctionSample) -> FunctionSample:
    return FunctionSample(f.grid, -f.values)

