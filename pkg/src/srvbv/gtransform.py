"""Generalised reparametrisations and the jump-embedding transform.

``Reparam`` covers the non-decreasing PL surjections of ``[0, 1]``.  The
jump embedding opens every jump of a curve into a straight ramp: the time
stretch ``xi`` makes room for the ramps, ``zeta`` is its non-decreasing left
inverse, and ``G(c)`` is the continuous curve traversing the jumps linearly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from .curve import SbvCurve, evaluate, length, require_continuous
from .exceptions import ReparamError, ZeroLengthError


@dataclass(frozen=True, eq=False)
class Reparam:
    """PL non-decreasing map of ``[0, 1]`` onto itself given by knots ``(x, y)``."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.shape[0] < 2:
            raise ReparamError("knots must be two 1-d arrays of equal length >= 2")
        if x[0] != 0.0 or x[-1] != 1.0 or np.any(np.diff(x) <= 0):
            raise ReparamError("knot abscissae must increase strictly from 0 to 1")
        if y[0] != 0.0 or y[-1] != 1.0 or np.any(np.diff(y) < 0):
            raise ReparamError("knot values must be non-decreasing from 0 to 1")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def identity(cls) -> "Reparam":
        return cls([0.0, 1.0], [0.0, 1.0])

    @classmethod
    def from_function(cls, f, n: int = 65) -> "Reparam":
        """Sample ``f`` at ``n`` uniform knots; endpoints are pinned to 0 and 1."""
        x = np.linspace(0.0, 1.0, n)
        y = np.array([f(v) for v in x], dtype=float)
        y[0], y[-1] = 0.0, 1.0
        return cls(x, np.maximum.accumulate(np.clip(y, 0.0, 1.0)))

    @property
    def is_strict(self) -> bool:
        return bool(np.all(np.diff(self.y) > 0))

    def slopes(self) -> np.ndarray:
        return np.diff(self.y) / np.diff(self.x)

    def __call__(self, x):
        return np.interp(x, self.x, self.y)

    def compose(self, inner: "Reparam") -> "Reparam":
        """``self o inner``."""
        x, y = pullback_knots(inner, self.x)
        return Reparam(x, _interp_exact(self, y))

    def knots(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])


def _interp_exact(phi: Reparam, y: np.ndarray) -> np.ndarray:
    out = np.interp(y, phi.x, phi.y)
    # knot hits return the stored value exactly; pin endpoints against drift
    out[0], out[-1] = 0.0, 1.0
    return out


def pullback_knots(phi: Reparam, targets) -> Tuple[np.ndarray, np.ndarray]:
    """Knots of ``phi`` plus the points where ``phi`` crosses each target value.

    Returns ``(x, y)`` sorted by ``x`` with ``y = phi(x)``; for crossing points
    ``y`` is the target itself rather than a re-interpolated value.
    """
    targets = np.unique(np.asarray(targets, dtype=float))
    j = np.searchsorted(phi.y, targets, side="right") - 1
    inside = (j >= 0) & (j < phi.y.shape[0] - 1)
    j, v = j[inside], targets[inside]
    cross = phi.y[j] != v
    j, v = j[cross], v[cross]
    x0, x1, y0, y1 = phi.x[j], phi.x[j + 1], phi.y[j], phi.y[j + 1]
    xc = x0 + (v - y0) * (x1 - x0) / (y1 - y0)
    ok = (xc > x0) & (xc < x1)
    xs = np.concatenate([phi.x, xc[ok]])
    ys = np.concatenate([phi.y, v[ok]])
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]
    keep = np.concatenate([[True], np.diff(xs) > 0])
    return xs[keep], ys[keep]


def compose_ac(c: SbvCurve, phi: Reparam) -> SbvCurve:
    """``c o phi`` for a continuous curve; nodes at phi's knots and the preimages of c's nodes."""
    require_continuous(c, "compose_ac")
    x, y = pullback_knots(phi, c.t)
    return SbvCurve.from_points(x, evaluate(c, y))


def _node_sides(c: SbvCurve, total: float):
    """Left and right values of the time stretch at every node of ``c``."""
    jumps = np.linalg.norm(c.jump_vectors(), axis=1)
    after = np.cumsum(jumps)
    before = after - jumps
    alpha = float(after[-1]) / (2.0 * total)
    xl = before / (2.0 * total) + (1.0 - alpha) * c.t
    xr = after / (2.0 * total) + (1.0 - alpha) * c.t
    xl[0] = xr[0] = 0.0
    xr[-1] = 1.0
    if jumps[-1] == 0.0:
        xl[-1] = 1.0
    return xl, xr, alpha


def _require_length(c: SbvCurve) -> float:
    total = length(c)
    if total <= 0.0:
        raise ZeroLengthError("the jump embedding needs a curve of positive length")
    return total


def xi(c: SbvCurve) -> Tuple[SbvCurve, float]:
    """Time stretch ``xi`` as a 1-d SBV curve, with the budget ``alpha``.

    ``xi(x) = |D^s c|(0, x) / (2 len c) + (1 - alpha) x`` where
    ``alpha = |D^s c|(I) / (2 len c)``; it jumps exactly where ``c`` does.
    """
    total = _require_length(c)
    xl, xr, alpha = _node_sides(c, total)
    return SbvCurve(c.t, xl[:, None], xr[:, None]), alpha


def _zeta_knots(c: SbvCurve, xl, xr):
    jump = xl != xr
    xs, ys = [], []
    for k in range(c.n_nodes):
        xs.append(xl[k])
        ys.append(c.t[k])
        if jump[k]:
            xs.append(xr[k])
            ys.append(c.t[k])
    return np.array(xs), np.array(ys), jump


def zeta(c: SbvCurve) -> Reparam:
    """Non-decreasing left inverse of the time stretch; constant on every ramp interval."""
    total = _require_length(c)
    xl, xr, _ = _node_sides(c, total)
    xs, ys, _ = _zeta_knots(c, xl, xr)
    return Reparam(xs, ys)


class JumpEmbedding(NamedTuple):
    curve: SbvCurve
    xi: SbvCurve
    zeta: Reparam
    alpha: float


def jump_embedding(c: SbvCurve) -> JumpEmbedding:
    """``G(c)`` together with ``xi``, ``zeta`` and ``alpha`` from a single pass."""
    total = _require_length(c)
    xl, xr, alpha = _node_sides(c, total)
    xs, ys, jump = _zeta_knots(c, xl, xr)
    vals = []
    for k in range(c.n_nodes):
        vals.append(c.left[k])
        if jump[k]:
            vals.append(c.right[k])
    g = SbvCurve.from_points(xs, np.array(vals))
    return JumpEmbedding(g, SbvCurve(c.t, xl[:, None], xr[:, None]), Reparam(xs, ys), alpha)


def g_transform(c: SbvCurve) -> SbvCurve:
    """Continuous curve tracing ``c`` with each jump replaced by a linear ramp."""
    return jump_embedding(c).curve


def bracket_representative(c: SbvCurve, phi: Reparam) -> SbvCurve:
    """Canonical element of the bracket ``[c, phi]``.

    Equals ``c(phi(x))`` wherever that is well defined.  On a maximal interval
    where ``phi`` rests at a jump parameter of ``c`` the jump segment is
    traversed affinely; where ``phi`` passes a jump parameter at a single
    point the result jumps there.
    """
    x, y = pullback_knots(phi, c.t)
    node_index = {float(t): k for k, t in enumerate(c.t)}
    jumps = c.jump_mask
    left = evaluate(c, y)
    right = left.copy()
    n = x.shape[0]
    i = 0
    while i < n:
        k = node_index.get(float(y[i]))
        if k is None or not jumps[k]:
            if k is not None:
                left[i] = right[i] = c.left[k]
            i += 1
            continue
        j = i
        while j + 1 < n and y[j + 1] == y[i]:
            j += 1
        lo, hi = c.left[k], c.right[k]
        if j == i:
            left[i], right[i] = lo, hi
        else:
            w = (x[i : j + 1] - x[i]) / (x[j] - x[i])
            seg = lo + w[:, None] * (hi - lo)
            left[i : j + 1] = seg
            right[i : j + 1] = seg
        i = j + 1
    return SbvCurve(x, left, right)


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    den = (ab * ab).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(den > 0, ((p - a) * ab).sum(axis=1) / den, 0.0)
    s = np.clip(s, 0.0, 1.0)
    return np.linalg.norm(p - (a + s[:, None] * ab), axis=1)


def is_in_bracket(g: SbvCurve, c: SbvCurve, phi: Reparam, tol: float = 1e-9, n_samples: int = 1000) -> bool:
    """Check membership of ``g`` in ``[c, phi]`` on knots plus uniform samples."""
    if abs(length(g) - length(c)) > tol:
        return False
    xs = np.unique(np.concatenate([g.t, phi.x, np.linspace(0.0, 1.0, n_samples)]))
    ys = phi(xs)
    # snap to node parameters of c that are within rounding of the image
    k = np.clip(np.searchsorted(c.t, ys), 0, c.n_nodes - 1)
    for cand in (k, np.maximum(k - 1, 0)):
        close = np.abs(c.t[cand] - ys) <= 1e-12
        ys = np.where(close, c.t[cand], ys)
    lo = evaluate(c, ys, side="left")
    hi = evaluate(c, ys, side="right")
    for side in ("left", "right"):
        p = evaluate(g, xs, side=side)
        if np.any(_segment_distance(p, lo, hi) > tol):
            return False
    return True
