"""Input coercion for the estimator layer."""
from __future__ import annotations

from typing import List

import numpy as np

from .curve import SbvCurve, check_curve


def as_curve(obj) -> SbvCurve:
    """Accept a curve or an ``(n, d)`` array of polyline points (uniform parameters)."""
    if isinstance(obj, SbvCurve):
        return check_curve(obj)
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise ValueError(f"expected an (n, d) point array with n >= 2, got shape {arr.shape}")
    return check_curve(SbvCurve.polyline(arr))


def check_curves(X) -> List[SbvCurve]:
    """Coerce a single curve, a list of curves/point arrays or a 3-d array into a list of curves."""
    if isinstance(X, SbvCurve):
        return [check_curve(X)]
    if isinstance(X, np.ndarray):
        if X.ndim == 3:
            return [as_curve(x) for x in X]
        if X.ndim == 2:
            return [as_curve(X)]
        raise ValueError(f"expected a 2-d or 3-d array, got {X.ndim}-d")
    items = list(X)
    if not items:
        raise ValueError("empty input")
    return [as_curve(x) for x in items]
