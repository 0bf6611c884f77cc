"""Reading and writing samples, bands and plot data.

CSV samples have header ``x1,...,xk,value`` with one row per grid point; the
rows must form a complete tensor product (any row order). JSON samples are
``{"axes": [[...], ...], "values": [...]}`` with values row-major. Bands use
``lower,upper`` in place of ``value`` (CSV) or ``"lower"``/``"upper"`` keys (JSON).
Floats are written with ``repr`` so a save/load round trip is value-identical.
"""

from __future__ import annotations

import csv
import json
import os
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import Band, FunctionSample, Malformed, RectGrid, point_str


def infer_format(path, fmt: Optional[str] = None) -> str:
    if fmt:
        if fmt not in ("csv", "json"):
            raise Malformed(f"unknown format {fmt!r}; use csv or json")
        return fmt
    ext = os.path.splitext(str(path))[1].lower()
    return "json" if ext == ".json" else "csv"


def _grid_from_rows(X: np.ndarray) -> Tuple[RectGrid, np.ndarray]:
    """Grid spanned by the coordinate rows and each row's flat index."""
    axes = [np.unique(X[:, j]) for j in range(X.shape[1])]
    try:
        grid = RectGrid(axes)
    except Malformed as e:
        raise Malformed(f"coordinates do not form a grid: {e}") from None
    if X.shape[0] != grid.size:
        raise Malformed(
            f"{X.shape[0]} rows but the axes span a {'x'.join(map(str, grid.shape))} "
            f"tensor product of {grid.size} points"
        )
    idx = tuple(np.searchsorted(a, X[:, j]) for j, a in enumerate(axes))
    flat = np.ravel_multi_index(idx, grid.shape)
    if np.unique(flat).size != flat.size:
        first = np.flatnonzero(np.bincount(flat) > 1)[0]
        raise Malformed(f"duplicate grid point {point_str(grid.points()[first])} in input")
    return grid, flat


def _read_csv(path, value_cols: Sequence[str]) -> Tuple[RectGrid, List[np.ndarray]]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise Malformed(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    nv = len(value_cols)
    k = len(header) - nv
    expect = [f"x{j + 1}" for j in range(k)] + list(value_cols)
    if k < 1 or header != expect:
        raise Malformed(f"{path}: header must be {','.join(['x1', '...', 'xk'] + list(value_cols))}, "
                        f"got {','.join(header)}")
    body = rows[1:]
    if not body:
        raise Malformed(f"{path}: no data rows")
    bad = [i for i, r in enumerate(body) if len(r) != len(header)]
    if bad:
        raise Malformed(f"{path}: row {bad[0] + 2} has {len(body[bad[0]])} fields, expected {len(header)}")
    try:
        data = np.array([[float(c) for c in r] for r in body])
    except ValueError as e:
        raise Malformed(f"{path}: non-numeric entry ({e})") from None
    if not np.all(np.isfinite(data)):
        i = int(np.argmax(~np.all(np.isfinite(data), axis=1)))
        raise Malformed(f"{path}: non-finite entry on row {i + 2}")
    grid, flat = _grid_from_rows(data[:, :k])
    cols = []
    for j in range(nv):
        v = np.empty(grid.size)
        v[flat] = data[:, k + j]
        cols.append(v)
    return grid, cols


def _write_csv(path, grid: RectGrid, cols: Dict[str, np.ndarray]) -> None:
    pts = grid.points()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{j + 1}" for j in range(grid.k)] + list(cols))
        for i in range(grid.size):
            w.writerow([repr(float(c)) for c in pts[i]] + [repr(float(v[i])) for v in cols.values()])


def _read_json(path, keys: Sequence[str]) -> Tuple[RectGrid, List[np.ndarray]]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise Malformed(f"{path}: invalid JSON ({e})") from None
    if not isinstance(doc, dict) or "axes" not in doc or any(k not in doc for k in keys):
        raise Malformed(f"{path}: JSON needs keys 'axes' and {', '.join(map(repr, keys))}")
    try:
        grid = RectGrid([np.asarray(a, dtype=float) for a in doc["axes"]])
        return grid, [np.asarray(doc[k], dtype=float).ravel() for k in keys]
    except (TypeError, ValueError) as e:
        if isinstance(e, Malformed):
            raise
        raise Malformed(f"{path}: {e}") from None


def _write_json(path, grid: RectGrid, cols: Dict[str, np.ndarray]) -> None:
    doc = {"axes": [a.tolist() for a in grid.axes]}
    doc.update({k: np.asarray(v, dtype=float).tolist() for k, v in cols.items()})
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_sample(path, fmt: Optional[str] = None) -> FunctionSample:
    fmt = infer_format(path, fmt)
    grid, (v,) = _read_csv(path, ["value"]) if fmt == "csv" else _read_json(path, ["values"])
    return FunctionSample(grid, v)


def save_sample(f: FunctionSample, path, fmt: Optional[str] = None) -> None:
    if infer_format(path, fmt) == "csv":
        _write_csv(path, f.grid, {"value": f.values})
    else:
        _write_json(path, f.grid, {"values": f.values})


def load_band(path, fmt: Optional[str] = None) -> Band:
    fmt = infer_format(path, fmt)
    reader = _read_csv if fmt == "csv" else _read_json
    grid, (lo, hi) = reader(path, ["lower", "upper"])
    return Band(FunctionSample(grid, lo), FunctionSample(grid, hi))


def save_band(band: Band, path, fmt: Optional[str] = None) -> None:
    cols = {"lower": band.lower.values, "upper": band.upper.values}
    if infer_format(path, fmt) == "csv":
        _write_csv(path, band.grid, cols)
    else:
        _write_json(path, band.grid, cols)


def write_plot_data(path, original: FunctionSample, enforced: FunctionSample,
                    band: Optional[Band] = None, enforced_band: Optional[Band] = None) -> None:
    """Long-format CSV: one row per grid point with original, enforced and band columns."""
    cols = {"original": original.values, "enforced": enforced.values}
    if band is not None:
        cols.update(lower=band.lower.values, upper=band.upper.values)
    if enforced_band is not None:
        cols.update(enforced_lower=enforced_band.lower.values,
                    enforced_upper=enforced_band.upper.values)
    _write_csv(path, original.grid, cols)
