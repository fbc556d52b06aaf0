"""Square-root-velocity transform and distances for continuous PL curves.

For piecewise-linear curves the transform is a step function, so every
integral below is evaluated in closed form on a common refinement of the
node grids.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import SbvCurve, check_same_dimension, evaluate, length, require_continuous
from .exceptions import ZeroLengthError


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Vector-valued step function on ``[0, 1]`` (one value per interval)."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float)
        vals = np.array(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if bp.ndim != 1 or bp.shape[0] != vals.shape[0] + 1:
            raise ValueError("need one value per breakpoint interval")
        if bp[0] != 0.0 or bp[-1] != 1.0 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    def on(self, breakpoints: np.ndarray) -> np.ndarray:
        """Values on the intervals of a refinement of this function's breakpoints."""
        mid = 0.5 * (breakpoints[:-1] + breakpoints[1:])
        k = np.searchsorted(self.breakpoints, mid, side="right") - 1
        return self.values[k]

    def inner(self, other: "StepFunction") -> float:
        """L2 inner product."""
        bp = np.union1d(self.breakpoints, other.breakpoints)
        a, b = self.on(bp), other.on(bp)
        return float(((a * b).sum(axis=1) * np.diff(bp)).sum())

    def norm_squared(self) -> float:
        return self.inner(self)


def srvt(c: SbvCurve) -> StepFunction:
    """``c' / sqrt|c'|`` on each linear piece; zero where the curve is stationary."""
    require_continuous(c, "srvt")
    v = c.segment_vectors() / np.diff(c.t)[:, None]
    speed = np.linalg.norm(v, axis=1)
    q = np.zeros_like(v)
    moving = speed > 0
    q[moving] = v[moving] / np.sqrt(speed[moving])[:, None]
    return StepFunction(c.t, q)


def srvt_inverse(q: StepFunction) -> SbvCurve:
    """Curve starting at the origin with velocity ``q |q|``."""
    slope = q.values * np.linalg.norm(q.values, axis=1)[:, None]
    pts = np.zeros((q.breakpoints.shape[0], q.dimension))
    pts[1:] = np.cumsum(slope * np.diff(q.breakpoints)[:, None], axis=0)
    return SbvCurve.from_points(q.breakpoints, pts)


def s_functional(c1: SbvCurve, c2: SbvCurve) -> float:
    """Signed L2 inner product of the two transforms.

    On a common linear piece with increments ``a`` and ``b`` the integral is
    ``<a, b> / sqrt(|a| |b|)``; the width cancels, so identical pieces give
    their length without rounding through the slopes.
    """
    check_same_dimension(c1, c2)
    require_continuous(c1, "s_functional")
    require_continuous(c2, "s_functional")
    grid = np.union1d(c1.t, c2.t)
    a = np.diff(evaluate(c1, grid), axis=0)
    b = np.diff(evaluate(c2, grid), axis=0)
    prod = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    dot = (a * b).sum(axis=1)
    moving = prod > 0
    return float((dot[moving] / np.sqrt(prod[moving])).sum())


def _radicand(l1: float, l2: float, s: float) -> float:
    r = l1 + l2 - 2.0 * s
    # below a few ulps of the lengths the value is rounding residue
    if abs(r) <= 8.0 * np.finfo(float).eps * (l1 + l2):
        return 0.0
    if r < 0.0:
        if r < -1e-12 * max(1.0, l1 + l2):
            raise ArithmeticError(f"negative squared distance {r!r}; inconsistent inputs")
        r = 0.0
    return r


def distance(c1: SbvCurve, c2: SbvCurve) -> float:
    """SRV distance ``sqrt(len1 + len2 - 2 S)``."""
    s = s_functional(c1, c2)
    return float(np.sqrt(_radicand(length(c1), length(c2), s)))


def scale_invariant_distance(c1: SbvCurve, c2: SbvCurve) -> float:
    """Spherical distance ``arccos S(c1/len1, c2/len2)`` between normalised transforms."""
    l1, l2 = length(c1), length(c2)
    if l1 <= 0.0 or l2 <= 0.0:
        raise ZeroLengthError("scale-invariant distance needs curves of positive length")
    cos = s_functional(c1, c2) / np.sqrt(l1 * l2)
    if abs(cos) > 1.0 + 1e-9:
        raise ArithmeticError(f"normalised inner product {cos!r} outside [-1, 1]")
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))
