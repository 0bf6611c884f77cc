"""Shape-enforced inference: band post-processing, weighted-bootstrap bands and a
Monte Carlo harness comparing original and shape-enforced estimators.

The bootstrap builds a uniform band ``f -/+ c * s`` for a series least-squares
fit evaluated on a grid: ``s`` is the rescaled interquartile range of the
bootstrap draws at each grid point and ``c`` is a bootstrap quantile of the
max-t statistic. Replicates reweight observations with i.i.d. standard
exponential weights.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from numpy.polynomial import legendre

from . import compose
from .core import Band, FunctionSample, Malformed, RectGrid, ShapeError, point_str
from .compose import OperatorSpec

IQR_NORMAL = 1.348980  # interquartile range of the standard normal
SUP_TOL = 1e-9
DEGENERATE_REL = 1e-12


class SingularDesign(ShapeError):
    pass


class DegenerateSE(ShapeError):
    pass


def enforce_band(band: Band, spec: OperatorSpec) -> Band:
    """Apply ``spec`` to both end-point functions of ``band``."""
    return Band(compose.apply(spec, band.lower), compose.apply(spec, band.upper))


def coverage_indicator(band: Band, f0: FunctionSample) -> bool:
    if f0.grid != band.grid:
        from .core import GridMismatch

        raise GridMismatch("target and band live on different grids")
    return bool(np.all(band.lower.values <= f0.values) and np.all(f0.values <= band.upper.values))


@dataclass(frozen=True)
class BootstrapConfig:
    reps: int = 200
    level: float = 0.95
    seed: int = 0
    weight_law: str = "standard_exponential"

    def __post_init__(self):
        if int(self.reps) < 2:
            raise Malformed("need at least 2 bootstrap repetitions")
        if not 0.0 < self.level < 1.0:
            raise Malformed("coverage level must lie in (0, 1)")
        if self.weight_law != "standard_exponential":
            raise Malformed(f"unsupported weight law {self.weight_law!r}")


@dataclass(frozen=True)
class SeriesModel:
    """Linear series model ``E[Y|X, Z] = P(X)'b + Z'g`` with ``P`` built over ``grid``.

    ``basis="indicator"`` uses one dummy per grid point (X must sit on the
    grid); ``basis="poly"`` uses a tensor product of Legendre polynomials of
    per-axis degree ``degree`` on coordinates rescaled to [-1, 1].
    """

    grid: RectGrid
    basis: str = "indicator"
    degree: int = 3
    includes_covariates: bool = False

    def __post_init__(self):
        if self.basis not in ("indicator", "poly"):
            raise Malformed(f"unknown basis {self.basis!r}")

    @property
    def n_basis(self) -> int:
        if self.basis == "indicator":
            return self.grid.size
        return (self.degree + 1) ** self.grid.k

    def _scaled(self, X: np.ndarray) -> np.ndarray:
        lo = np.array([a[0] for a in self.grid.axes])
        hi = np.array([a[-1] for a in self.grid.axes])
        return 2.0 * (X - lo) / (hi - lo) - 1.0

    def basis_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.shape[1] != self.grid.k:
            raise Malformed(f"X has {X.shape[1]} columns, grid has {self.grid.k} axes")
        if self.basis == "indicator":
            idx = []
            for j, a in enumerate(self.grid.axes):
                pos = np.searchsorted(a, X[:, j])
                pos = np.clip(pos, 0, a.size - 1)
                left = np.clip(pos - 1, 0, a.size - 1)
                pick = np.where(np.abs(a[left] - X[:, j]) < np.abs(a[pos] - X[:, j]), left, pos)
                if np.any(np.abs(a[pick] - X[:, j]) > 1e-9 * max(1.0, np.abs(a).max())):
                    raise Malformed("indicator basis needs every X on the grid")
                idx.append(pick)
            flat = np.ravel_multi_index(tuple(idx), self.grid.shape)
            P = np.zeros((X.shape[0], self.grid.size))
            P[np.arange(X.shape[0]), flat] = 1.0
            return P
        U = self._scaled(X)
        P = np.ones((X.shape[0], 1))
        for j in range(self.grid.k):
            V = legendre.legvander(U[:, j], self.degree)
            P = (P[:, :, None] * V[:, None, :]).reshape(X.shape[0], -1)
        return P

    def design(self, X, Z=None) -> np.ndarray:
        P = self.basis_matrix(X)
        if self.includes_covariates:
            if Z is None:
                raise Malformed("model includes covariates but Z was not given")
            Z = np.asarray(Z, dtype=float)
            if Z.ndim == 1:
                Z = Z[:, None]
            P = np.hstack([P, Z])
        return P

    def grid_design(self) -> np.ndarray:
        return self.basis_matrix(self.grid.points())


def _lstsq(D: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return np.linalg.lstsq(D, Y, rcond=None)[0]


@dataclass(frozen=True)
class BootstrapResult:
    estimate: FunctionSample
    band: Band
    se: np.ndarray = field(repr=False)
    critical_value: float = float("nan")
    replicates: np.ndarray = field(default=None, repr=False)


def bootstrap_fit(X, Y, model: SeriesModel, cfg: BootstrapConfig, Z=None,
                  rng: Optional[np.random.Generator] = None) -> BootstrapResult:
    """Point estimate and max-t uniform band from the weighted bootstrap."""
    Y = np.asarray(Y, dtype=float).ravel()
    D = model.design(X, Z)
    n, p = D.shape
    if Y.size != n:
        raise Malformed(f"{Y.size} responses for {n} design rows")
    if n <= p:
        raise SingularDesign(f"{n} observations for {p} design columns")
    if np.linalg.matrix_rank(D) < p:
        raise SingularDesign("design matrix is rank deficient")
    G = model.grid_design()
    nb = model.n_basis

    beta = _lstsq(D, Y)
    f = G @ beta[:nb]

    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    reps = np.empty((cfg.reps, f.size))
    for b in range(cfg.reps):
        w = np.sqrt(rng.standard_exponential(n))
        bb = _lstsq(D * w[:, None], Y * w)
        reps[b] = G @ bb[:nb]

    q75, q25 = np.percentile(reps, [75, 25], axis=0)
    s = (q75 - q25) / IQR_NORMAL
    # rounding noise in otherwise identical replicates is not a standard error
    if np.any(s <= DEGENERATE_REL * (1.0 + np.max(np.abs(f)))):
        i = int(np.argmin(s))
        raise DegenerateSE(f"bootstrap IQR is zero at grid point {point_str(model.grid.points()[i])}")
    tmax = np.max(np.abs(reps - f) / s, axis=1)
    c = float(np.quantile(tmax, cfg.level, method="inverted_cdf"))
    est = FunctionSample(model.grid, f)
    band = Band(est.with_values(f - c * s), est.with_values(f + c * s))
    return BootstrapResult(est, band, s, c, reps)


def bootstrap_band(X, Y, model: SeriesModel, cfg: BootstrapConfig, Z=None,
                   rng: Optional[np.random.Generator] = None):
    """``(estimate, band)`` from :func:`bootstrap_fit`."""
    r = bootstrap_fit(X, Y, model, cfg, Z, rng)
    return r.estimate, r.band


# ---------------------------------------------------------------------------
# synthetic data generating processes


@dataclass
class GrowthLike:
    """Univariate partially linear DGP on an integer grid ``0..m-1``.

    The target is the concave, nondecreasing envelope of a fixed noisy
    saturating template; ``Y = f0(X) + Z'gamma + sigma * eps``. All constants are
    synthetic defaults.
    """

    m: int = 20
    level: float = 60.0
    rise: float = 20.0
    scale: float = 6.0
    template_noise: float = 0.5
    template_seed: int = 20240601
    gamma: Sequence[float] = (1.0, -0.5)
    sigma: float = 3.0
    name: str = "growth-like"

    def __post_init__(self):
        from .compose import parse_op

        self.grid = RectGrid([np.arange(self.m, dtype=float)])
        x = self.grid.axes[0]
        t_rng = np.random.default_rng(self.template_seed)
        template = self.level + self.rise * (1 - np.exp(-x / self.scale))
        template = template + self.template_noise * t_rng.standard_normal(self.m)
        self.f0 = compose.apply(parse_op("c-m"), FunctionSample(self.grid, template))
        self.gamma = np.asarray(self.gamma, dtype=float)
        self.model = SeriesModel(self.grid, "indicator", includes_covariates=self.gamma.size > 0)

    def sample(self, n: int, rng: np.random.Generator):
        x = self.grid.axes[0]
        while True:
            idx = rng.integers(0, self.m, size=n)
            if np.unique(idx).size == self.m:
                break
        X = x[idx][:, None]
        Z = rng.standard_normal((n, self.gamma.size)) if self.gamma.size else None
        Y = self.f0.values[idx] + self.sigma * rng.standard_normal(n)
        if Z is not None:
            Y = Y + Z @ self.gamma
        return X, Z, Y


@dataclass
class ProductionLike:
    """Bivariate linear DGP ``Y = c + b1 L + b2 K + sigma * eps`` with uniform inputs.

    The evaluation grid spans the 10%-90% quantiles of each input; the fit is a
    tensor-product cubic. Coefficients are synthetic defaults with b1, b2 > 0.
    """

    m: int = 20
    intercept: float = 1.0
    b1: float = 2.0
    b2: float = 1.0
    sigma: float = 1.0
    degree: int = 3
    name: str = "production-like"

    def __post_init__(self):
        ax = np.linspace(0.1, 0.9, self.m)
        self.grid = RectGrid([ax, ax])
        pts = self.grid.points()
        self.f0 = FunctionSample(self.grid, self.intercept + self.b1 * pts[:, 0] + self.b2 * pts[:, 1])
        self.model = SeriesModel(self.grid, "poly", degree=self.degree)

    def sample(self, n: int, rng: np.random.Generator):
        X = rng.uniform(0.0, 1.0, size=(n, 2))
        Y = self.intercept + X @ np.array([self.b1, self.b2]) + self.sigma * rng.standard_normal(n)
        return X, None, Y


DGPS = {"growth-like": GrowthLike, "production-like": ProductionLike}


def make_dgp(name: str, **kwargs):
    try:
        return DGPS[name](**kwargs)
    except KeyError:
        raise Malformed(f"unknown DGP {name!r}; choose from {sorted(DGPS)}") from None


# ---------------------------------------------------------------------------
# Monte Carlo harness


@dataclass(frozen=True)
class McDiagnostics:
    op: str
    n: int
    sup_error_mean: float
    band_width_mean: float
    coverage_rate: float


@dataclass
class McStudy:
    dgp: str
    ops: List[str]
    n_list: List[int]
    diagnostics: List[McDiagnostics]
    draws: List[Dict]

    def table(self) -> Dict[str, Dict[int, McDiagnostics]]:
        out: Dict[str, Dict[int, McDiagnostics]] = {}
        for d in self.diagnostics:
            out.setdefault(d.op, {})[d.n] = d
        return out

    def improvement_failures(self, tol: float = SUP_TOL) -> List[Dict]:
        """Draws where an enforced variant is worse than the original on any of
        sup-error, coverage or sup-width."""
        base = {(r["n"], r["draw"]): r for r in self.draws if r["op"] == "original"}
        bad = []
        for r in self.draws:
            if r["op"] == "original":
                continue
            o = base[(r["n"], r["draw"])]
            if (r["sup_error"] > o["sup_error"] + tol
                    or r["width"] > o["width"] + tol
                    or (o["covered"] and not r["covered"])):
                bad.append(r)
        return bad

    def write_csv(self, path) -> None:
        """One row per operator; three diagnostics per sample size."""
        table = self.table()
        header = ["operator"]
        for n in self.n_list:
            header += [f"sup_error_n{n}", f"width_n{n}", f"coverage_n{n}"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for op in self.ops:
                row = [op]
                for n in self.n_list:
                    d = table[op][n]
                    row += [f"{d.sup_error_mean:.6g}", f"{d.band_width_mean:.6g}",
                            f"{d.coverage_rate:.4f}"]
                w.writerow(row)

    def format(self) -> str:
        table = self.table()
        lines = [f"DGP {self.dgp}"]
        for n in self.n_list:
            lines.append(f"  n = {n}")
            lines.append(f"    {'operator':<12}{'sup err':>10}{'sup width':>12}{'coverage':>10}")
            for op in self.ops:
                d = table[op][n]
                lines.append(f"    {op:<12}{d.sup_error_mean:>10.4g}{d.band_width_mean:>12.4g}"
                             f"{d.coverage_rate:>10.3f}")
        return "\n".join(lines)


def run_mc_study(
    dgp,
    ops: Sequence[OperatorSpec],
    n_list: Sequence[int],
    sims: int,
    cfg: BootstrapConfig,
    progress=None,
) -> McStudy:
    """Simulate ``sims`` datasets per sample size and compare operator variants.

    The original (unrestricted) estimator is always included. Draw ``d`` at
    sample size ``n`` uses the generator seeded with ``(cfg.seed, n, d)``.
    """
    if isinstance(dgp, str):
        dgp = make_dgp(dgp)
    specs = [s for s in ops if not s.is_identity]
    names = ["original"] + [str(s) for s in specs]
    if len(set(names)) != len(names):
        raise Malformed("operator variants must be distinct")
    f0 = dgp.f0
    draws: List[Dict] = []
    for n in n_list:
        for d in range(sims):
            rng = np.random.default_rng([cfg.seed, n, d])
            X, Z, Y = dgp.sample(n, rng)
            res = bootstrap_fit(X, Y, dgp.model, cfg, Z, rng)
            variants = [("original", res.estimate, res.band)]
            for name, spec in zip(names[1:], specs):
                variants.append((name, compose.apply(spec, res.estimate), enforce_band(res.band, spec)))
            for name, est, band in variants:
                draws.append({
                    "n": n, "draw": d, "op": name,
                    "sup_error": float(np.max(np.abs(est.values - f0.values))),
                    "width": float(np.max(band.upper.values - band.lower.values)),
                    "covered": coverage_indicator(band, f0),
                })
            if progress is not None:
                progress(n, d)
    diags = []
    for n in n_list:
        for name in names:
            rows = [r for r in draws if r["n"] == n and r["op"] == name]
            diags.append(McDiagnostics(
                name, n,
                float(np.mean([r["sup_error"] for r in rows])),
                float(np.mean([r["width"] for r in rows])),
                float(np.mean([r["covered"] for r in rows])),
            ))
    return McStudy(dgp.name, names, list(n_list), diags, draws)
