"""Monotonicity: increasing rearrangement and isotonic projection.

In one dimension the increasing rearrangement of grid values is just the
ascending sort. In ``k`` dimensions the one-dimensional rearrangement is
applied along each axis in turn, for every axis order in a permutation set,
and the results are averaged. All of this assumes equal cell measure, so the
axes must be equispaced.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import FunctionSample, Malformed, UnsupportedGrid

DEFAULT_SAMPLE = 24
MAX_FULL_K = 4


@dataclass(frozen=True)
class PermutationSet:
    """Axis orders (0-based) over which rearrangements are averaged."""

    perms: tuple

    def __post_init__(self):
        perms = tuple(tuple(int(i) for i in p) for p in self.perms)
        if not perms:
            raise Malformed("permutation set must be non-empty")
        k = len(perms[0])
        for p in perms:
            if sorted(p) != list(range(k)):
                raise Malformed(f"{p} is not a permutation of 0..{k - 1}")
        if len(set(perms)) != len(perms):
            raise Malformed("duplicate permutations")
        object.__setattr__(self, "perms", perms)

    @property
    def k(self) -> int:
        return len(self.perms[0])

    def __len__(self) -> int:
        return len(self.perms)

    @classmethod
    def all(cls, k: int) -> "PermutationSet":
        return cls(tuple(itertools.permutations(range(k))))

    @classmethod
    def sample(cls, k: int, n: int, seed: int = 0) -> "PermutationSet":
        """``n`` distinct axis orders drawn with a seeded generator (all of them if
        ``n >= k!``)."""
        total = math.factorial(k)
        if n >= total:
            return cls.all(k)
        if n < 1:
            raise Malformed("need at least one permutation")
        rng = np.random.default_rng(seed)
        seen = {}
        while len(seen) < n:
            p = tuple(int(i) for i in rng.permutation(k))
            seen.setdefault(p, None)
        return cls(tuple(seen))

    @classmethod
    def default(cls, k: int, seed: int = 0) -> "PermutationSet":
        if k <= MAX_FULL_K:
            return cls.all(k)
        return cls.sample(k, DEFAULT_SAMPLE, seed)

    @classmethod
    def parse(cls, text: str, k: int, seed: int = 0) -> "PermutationSet":
        """``"all"`` or ``"sample:<n>"``."""
        text = text.strip().lower()
        if text == "all":
            return cls.all(k)
        if text.startswith("sample:"):
            try:
                n = int(text.split(":", 1)[1])
            except ValueError as exc:
                raise Malformed(f"bad permutation spec {text!r}") from exc
            return cls.sample(k, n, seed)
        raise Malformed(f"permutation spec must be 'all' or 'sample:<n>', got {text!r}")


class MonotoneKind(enum.Enum):
    REARRANGEMENT = "rearrange"
    ISOTONIC_1D = "isotonic"
    CONVEX_MIX = "mix"


@dataclass(frozen=True)
class MonotoneOpChoice:
    kind: MonotoneKind = MonotoneKind.REARRANGEMENT
    mix_weight: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.mix_weight <= 1.0:
            raise Malformed("mix weight must lie in [0, 1]")

    @classmethod
    def parse(cls, text: str) -> "MonotoneOpChoice":
        """``rearrange``, ``isotonic`` or ``mix:<lambda>``."""
        text = text.strip().lower()
        if text == "rearrange":
            return cls()
        if text == "isotonic":
            return cls(MonotoneKind.ISOTONIC_1D)
        if text.startswith("mix:"):
            try:
                lam = float(text.split(":", 1)[1])
            except ValueError as exc:
                raise Malformed(f"bad mix weight in {text!r}") from exc
            return cls(MonotoneKind.CONVEX_MIX, lam)
        raise Malformed(f"unknown monotone operator {text!r}")

    def __str__(self) -> str:
        if self.kind is MonotoneKind.CONVEX_MIX:
            return f"mix:{self.mix_weight:g}"
        return self.kind.value


def rearrange_1d(values) -> np.ndarray:
    return np.sort(np.asarray(values, dtype=float), kind="stable")


def isotonic_1d(values, weights=None) -> np.ndarray:
    """Weighted least-squares projection onto nondecreasing sequences (PAVA)."""
    y = np.asarray(values, dtype=float).ravel()
    n = y.size
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float).ravel()
    if w.size != n or np.any(w <= 0):
        raise Malformed("isotonic weights must be positive, one per value")
    # blocks as parallel stacks: weighted mean, total weight, length
    means = np.empty(n)
    wts = np.empty(n)
    lens = np.empty(n, dtype=np.int64)
    top = -1
    for i in range(n):
        top += 1
        means[top], wts[top], lens[top] = y[i], w[i], 1
        while top > 0 and means[top - 1] > means[top]:
            tw = wts[top - 1] + wts[top]
            means[top - 1] = (wts[top - 1] * means[top - 1] + wts[top] * means[top]) / tw
            wts[top - 1] = tw
            lens[top - 1] += lens[top]
            top -= 1
    return np.repeat(means[: top + 1], lens[: top + 1])


def _require_equispaced(f: FunctionSample) -> None:
    for j in range(f.grid.k):
        if not f.grid.is_equispaced(j):
            raise UnsupportedGrid(
                f"rearrangement needs equispaced axes; axis {j} is not"
            )


def rearrange_perm(arr: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Compose the axis-wise sorts; ``perm[-1]`` is applied first."""
    out = arr
    for j in reversed(perm):
        out = np.sort(out, axis=j, kind="stable")
    return out


def rearrange_multi(
    f: FunctionSample, perms: Optional[PermutationSet] = None, seed: int = 0
) -> FunctionSample:
    """Increasing rearrangement averaged over the axis orders in ``perms``."""
    _require_equispaced(f)
    k = f.grid.k
    if perms is None:
        perms = PermutationSet.default(k, seed)
    if perms.k != k:
        raise Malformed(f"permutations act on {perms.k} axes, grid has {k}")
    arr = f.as_array()
    total = np.zeros(f.grid.shape)
    # fixed summation order keeps the result reproducible bit for bit
    for p in perms.perms:
        total += rearrange_perm(arr, p)
    return f.with_values(total / len(perms))


def monotone(
    f: FunctionSample,
    choice: MonotoneOpChoice = MonotoneOpChoice(),
    perms: Optional[PermutationSet] = None,
    seed: int = 0,
) -> FunctionSample:
    """Nondecreasing version of ``f`` using the operator picked by ``choice``."""
    if choice.kind is MonotoneKind.REARRANGEMENT:
        return rearrange_multi(f, perms, seed)
    if f.grid.k != 1:
        raise UnsupportedGrid(f"{choice} is only available for one-dimensional grids")
    iso = isotonic_1d(f.values, f.grid.cell_weights())
    if choice.kind is MonotoneKind.ISOTONIC_1D:
        return f.with_values(iso)
    _require_equispaced(f)
    lam = choice.mix_weight
    return f.with_values(lam * rearrange_1d(f.values) + (1.0 - lam) * iso)
