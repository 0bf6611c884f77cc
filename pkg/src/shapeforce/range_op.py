"""Range restriction: clip function values into ``[lo, hi]``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FunctionSample, ShapeError


class InvalidBounds(ShapeError):
    pass


@dataclass(frozen=True)
class RangeBounds:
    """Closed value range; either end may be infinite for a one-sided restriction."""

    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise InvalidBounds(f"need lo <= hi, got [{self.lo}, {self.hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def parse(cls, text: str) -> "RangeBounds":
        """Parse ``"lo,hi"``; ``inf``/``-inf`` are accepted on either side."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise InvalidBounds(f"expected 'lo,hi', got {text!r}")
        try:
            lo, hi = (float(p) for p in parts)
        except ValueError as exc:
            raise InvalidBounds(f"cannot parse range {text!r}") from exc
        return cls(lo, hi)

    def __str__(self) -> str:
        return f"[{self.lo:g}, {self.hi:g}]"


def clip_values(values: np.ndarray, bounds: RangeBounds) -> np.ndarray:
    return np.minimum(np.maximum(values, bounds.lo), bounds.hi)


def apply_range(f: FunctionSample, bounds: RangeBounds) -> FunctionSample:
    if not isinstance(bounds, RangeBounds):
        bounds = RangeBounds(*bounds)
    return f.with_values(clip_values(f.values, bounds))
