"""Shape-enforcing operators for functions sampled on rectangular grids."""

from .core import (
    SUP,
    Band,
    FunctionSample,
    GridMismatch,
    InvalidBand,
    Malformed,
    RectGrid,
    ShapeError,
    UnsupportedGrid,
    distance,
    leq,
    negate,
)
from .lp import LinearProgram, LpStatus, SolverError, solve
from .geometry import PointSet, in_convex_hull
from .range_op import RangeBounds, apply_range
from .rearrange import MonotoneOpChoice, PermutationSet, isotonic_1d, monotone, rearrange_multi
from .convex import concavify, convexify, dlf_at_point, gcm_1d
from .quasiconvex import lower_contour, quasiconcavify, quasiconvexify
from .compose import OperatorSpec, OrderError, TransformDomain, apply, check_shape, parse_op
from .inference import (
    BootstrapConfig,
    DegenerateSE,
    SeriesModel,
    SingularDesign,
    bootstrap_band,
    coverage_indicator,
    enforce_band,
    run_mc_study,
)

__version__ = "0.1.0"

__all__ = [
    "SUP",
    "Band",
    "FunctionSample",
    "GridMismatch",
    "InvalidBand",
    "Malformed",
    "RectGrid",
    "ShapeError",
    "UnsupportedGrid",
    "distance",
    "leq",
    "negate",
    "LinearProgram",
    "LpStatus",
    "SolverError",
    "solve",
    "PointSet",
    "in_convex_hull",
    "RangeBounds",
    "apply_range",
    "MonotoneOpChoice",
    "PermutationSet",
    "isotonic_1d",
    "monotone",
    "rearrange_multi",
    "concavify",
    "convexify",
    "dlf_at_point",
    "gcm_1d",
    "lower_contour",
    "quasiconcavify",
    "quasiconvexify",
    "OperatorSpec",
    "OrderError",
    "TransformDomain",
    "apply",
    "check_shape",
    "parse_op",
    "BootstrapConfig",
    "DegenerateSE",
    "SeriesModel",
    "SingularDesign",
    "bootstrap_band",
    "coverage_indicator",
    "enforce_band",
    "run_mc_study",
]
