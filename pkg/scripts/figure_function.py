"""Plot data for the step-plus-exponential test function on [0, 1].

Writes a long CSV with the original values and the convex, quasi-convex and
convex-monotone-range versions, ready for any external plotting tool.
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass

import numpy as np

from shapeforce import FunctionSample, RectGrid, apply, parse_op


@dataclass
class FigureConfig:
    points: int = 101
    lo: float = 0.1
    hi: float = 0.9
    out: str = "figure_function.csv"


def figure_function(x):
    return (10 * np.exp(1.5 * x) - np.floor(10 * x + 1e-9) - 10) / 25


def main(cfg: FigureConfig) -> None:
    g = RectGrid([np.linspace(0, 1, cfg.points)])
    f = FunctionSample(g, figure_function(g.axes[0]))
    bounds = f"{cfg.lo},{cfg.hi}"
    cols = {name: apply(parse_op(op, bounds=bounds), f).values
            for name, op in [("convex", "c"), ("quasiconvex", "q"), ("cmr", "cmr")]}
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "original", *cols])
        for i, x in enumerate(g.axes[0]):
            w.writerow([f"{x:.6g}", f"{f.values[i]:.10g}", *(f"{v[i]:.10g}" for v in cols.values())])
    print(f"wrote {cfg.out} ({cfg.points} points)")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--points", type=int, default=FigureConfig.points)
    p.add_argument("--lo", type=float, default=FigureConfig.lo)
    p.add_argument("--hi", type=float, default=FigureConfig.hi)
    p.add_argument("--out", default=FigureConfig.out)
    main(FigureConfig(**vars(p.parse_args())))
