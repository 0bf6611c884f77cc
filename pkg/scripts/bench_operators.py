"""Wall-clock cost of the LP-based operators across grid sizes."""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from shapeforce import FunctionSample, convexify, quasiconvexify
from shapeforce.core import RectGrid


@dataclass
class BenchConfig:
    repeats: int = 3
    seed: int = 0


SHAPES = [(50,), (500,), (8, 8), (15, 15), (30, 30), (6, 6, 6), (10, 10, 10)]


def best_of(fn, f, repeats):
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        fn(f)
        times.append(time.perf_counter() - t)
    return min(times)


def main(cfg: BenchConfig) -> None:
    rng = np.random.default_rng(cfg.seed)
    warm = FunctionSample(RectGrid([[0, 1], [0, 1]]), [0, 1, 1, 0])
    convexify(warm), quasiconvexify(warm)  # compile the numba kernels
    print(f"{'grid':>12} {'n':>6} {'C (ms)':>10} {'Q (ms)':>10}")
    for shape in SHAPES:
        g = RectGrid([np.linspace(0, 1, m) for m in shape])
        f = FunctionSample(g, rng.normal(size=g.size))
        tc = best_of(convexify, f, cfg.repeats)
        tq = best_of(quasiconvexify, f, cfg.repeats)
        print(f"{'x'.join(map(str, shape)):>12} {g.size:>6} {tc * 1e3:>10.1f} {tq * 1e3:>10.1f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeats", type=int, default=BenchConfig.repeats)
    p.add_argument("--seed", type=int, default=BenchConfig.seed)
    main(BenchConfig(**vars(p.parse_args())))
