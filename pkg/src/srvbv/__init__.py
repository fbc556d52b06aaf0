"""Square-root-velocity distances for piecewise-linear curves with jumps."""
from .curve import (
    AcCurve,
    Node,
    SbvCurve,
    Violation,
    constant_speed,
    decompose,
    evaluate,
    jump_set,
    length,
    normalize_bv0,
    validate,
)
from .exceptions import (
    CurveError,
    DimensionMismatchError,
    EnumerationLimitError,
    GridError,
    InvalidCurveError,
    ReparamError,
    ZeroLengthError,
)
from .gtransform import Reparam, bracket_representative, g_transform, is_in_bracket, jump_embedding, xi, zeta
from .matching import GridConfig, MatchResult, correspondences, match_dp, refine, shape_distance
from .measure import PiecewiseMeasure, derivative, s_hat_measure
from .relax import d_hat, d_hat_bracket, s_hat
from .srvt import distance, s_functional, scale_invariant_distance, srvt, srvt_inverse

__version__ = "0.1.0"

__all__ = [
    "AcCurve",
    "CurveError",
    "DimensionMismatchError",
    "EnumerationLimitError",
    "GridConfig",
    "GridError",
    "InvalidCurveError",
    "MatchResult",
    "Node",
    "PiecewiseMeasure",
    "Reparam",
    "ReparamError",
    "SbvCurve",
    "Violation",
    "ZeroLengthError",
    "bracket_representative",
    "constant_speed",
    "correspondences",
    "d_hat",
    "d_hat_bracket",
    "decompose",
    "derivative",
    "distance",
    "evaluate",
    "g_transform",
    "is_in_bracket",
    "jump_embedding",
    "jump_set",
    "length",
    "match_dp",
    "normalize_bv0",
    "refine",
    "s_functional",
    "s_hat",
    "s_hat_measure",
    "scale_invariant_distance",
    "shape_distance",
    "srvt",
    "srvt_inverse",
    "validate",
    "xi",
    "zeta",
]
