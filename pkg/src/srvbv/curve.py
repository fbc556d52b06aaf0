"""Piecewise-linear curves of bounded variation with finitely many jumps.

A curve is stored as an ordered list of nodes ``(t, left, right)``.  Between
two consecutive nodes the curve is the straight segment from the right value
of the first node to the left value of the second one.  A node whose left
and right values differ is a jump node; the jump vector is ``right - left``.
Absolutely continuous curves are simply curves without jump nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from .exceptions import CurveError, DimensionMismatchError, InvalidCurveError, ZeroLengthError


def _frozen(a, dtype=float) -> np.ndarray:
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Node:
    t: float
    left: np.ndarray
    right: np.ndarray

    @property
    def is_jump(self) -> bool:
        return bool(np.any(self.left != self.right))


@dataclass(frozen=True, eq=False)
class SbvCurve:
    """Immutable piecewise-linear SBV curve on ``[0, 1]``.

    Parameters
    ----------
    t : array of shape (n,)
        Node parameters.
    left, right : arrays of shape (n, d)
        One-sided values at the nodes.

    Construction only checks array shapes; use :func:`validate` (or
    :func:`check_curve`) for the ordering and endpoint invariants.
    """

    t: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        left = np.asarray(self.left, dtype=float)
        right = np.asarray(self.right, dtype=float)
        if left.ndim == 1:
            left = left[:, None]
        if right.ndim == 1:
            right = right[:, None]
        if t.ndim != 1 or left.ndim != 2 or right.shape != left.shape or left.shape[0] != t.shape[0]:
            raise CurveError(
                f"inconsistent node arrays: t{t.shape}, left{left.shape}, right{right.shape}"
            )
        if left.shape[1] < 1:
            raise CurveError("dimension must be at least 1")
        object.__setattr__(self, "t", _frozen(t))
        object.__setattr__(self, "left", _frozen(left))
        object.__setattr__(self, "right", _frozen(right))

    # -- constructors -------------------------------------------------
    @classmethod
    def from_points(cls, t, values) -> "SbvCurve":
        """Continuous curve through ``values`` at parameters ``t``."""
        values = np.asarray(values, dtype=float)
        return cls(t, values, values)

    @classmethod
    def polyline(cls, points, t=None) -> "SbvCurve":
        """Continuous curve through ``points``; uniform parameters unless ``t`` is given."""
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if t is None:
            t = np.linspace(0.0, 1.0, len(points))
        return cls.from_points(t, points)

    @classmethod
    def from_nodes(cls, nodes: Sequence[Node]) -> "SbvCurve":
        return cls(
            [n.t for n in nodes],
            np.array([np.atleast_1d(n.left) for n in nodes], dtype=float),
            np.array([np.atleast_1d(n.right) for n in nodes], dtype=float),
        )

    # -- basic properties ---------------------------------------------
    @property
    def dimension(self) -> int:
        return self.left.shape[1]

    @property
    def n_nodes(self) -> int:
        return self.t.shape[0]

    @property
    def nodes(self) -> List[Node]:
        return [Node(float(t), l, r) for t, l, r in zip(self.t, self.left, self.right)]

    @property
    def jump_mask(self) -> np.ndarray:
        return np.any(self.left != self.right, axis=1)

    @property
    def is_continuous(self) -> bool:
        return not bool(self.jump_mask.any())

    def segment_vectors(self) -> np.ndarray:
        """Increments ``left[k+1] - right[k]`` of the linear pieces."""
        return self.left[1:] - self.right[:-1]

    def jump_vectors(self) -> np.ndarray:
        return self.right - self.left

    def with_values(self, left, right=None) -> "SbvCurve":
        return SbvCurve(self.t, left, left if right is None else right)

    def __eq__(self, other):
        if not isinstance(other, SbvCurve):
            return NotImplemented
        return (
            self.t.shape == other.t.shape
            and self.left.shape == other.left.shape
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.left, other.left)
            and np.array_equal(self.right, other.right)
        )

    __hash__ = None

    def __repr__(self):
        return f"SbvCurve(n_nodes={self.n_nodes}, dimension={self.dimension}, jumps={int(self.jump_mask.sum())})"


# Alias used in signatures where a curve without jumps is expected.
AcCurve = SbvCurve


@dataclass(frozen=True)
class Violation:
    index: int
    rule: str
    message: str

    def __str__(self):
        return f"node {self.index}: {self.rule}: {self.message}"


def validate(curve: SbvCurve) -> List[Violation]:
    """Return the list of invariant violations (empty iff the curve is valid)."""
    out: List[Violation] = []
    t = [float(v) for v in curve.t]
    n = len(t)
    if n < 2:
        out.append(Violation(0, "node-count", f"need at least 2 nodes, got {n}"))
    for i in range(n):
        if not np.isfinite(t[i]):
            out.append(Violation(i, "finite", "parameter is not finite"))
        elif not 0.0 <= t[i] <= 1.0:
            out.append(Violation(i, "range", f"t={t[i]!r} outside [0, 1]"))
        if not (np.all(np.isfinite(curve.left[i])) and np.all(np.isfinite(curve.right[i]))):
            out.append(Violation(i, "finite", "node value is not finite"))
        if i > 0 and not t[i] > t[i - 1]:
            out.append(Violation(i, "monotonicity", f"t={t[i]!r} does not exceed previous t={t[i - 1]!r}"))
    if n:
        if t[0] != 0.0:
            out.append(Violation(0, "start", f"first node must have t=0, got {t[0]!r}"))
        if t[-1] != 1.0 and n >= 2:
            out.append(Violation(n - 1, "end", f"last node must have t=1, got {t[-1]!r}"))
        if np.any(curve.left[0] != curve.right[0]):
            out.append(Violation(0, "first-node-jump", "first node must satisfy left == right"))
    return out


def check_curve(curve: SbvCurve) -> SbvCurve:
    violations = validate(curve)
    if violations:
        raise InvalidCurveError(violations)
    return curve


def check_same_dimension(c1: SbvCurve, c2: SbvCurve) -> None:
    if c1.dimension != c2.dimension:
        raise DimensionMismatchError(f"dimension mismatch: {c1.dimension} vs {c2.dimension}")


def require_continuous(curve: SbvCurve, what: str = "operation") -> None:
    if not curve.is_continuous:
        raise CurveError(f"{what} requires an absolutely continuous curve (no jump nodes)")


def evaluate(curve: SbvCurve, t, side: str = "right", theta: float | None = None) -> np.ndarray:
    """Evaluate a good representative of ``curve`` at ``t``.

    ``side`` selects the left limit, the right limit, or (``"interior"``) the
    convex combination ``(1 - theta) * left + theta * right``.  All three agree
    away from jump nodes.  Scalar ``t`` gives shape ``(d,)``, array ``t`` gives
    ``(m, d)``.
    """
    if side not in ("left", "right", "interior"):
        raise ValueError(f"side must be 'left', 'right' or 'interior', got {side!r}")
    if side == "interior":
        if theta is None:
            theta = 0.5
        if not 0.0 <= theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    scalar = np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~(ts >= 0.0)) or np.any(~(ts <= 1.0)):
        raise CurveError("evaluation parameter outside [0, 1]")
    nodes = curve.t
    n = nodes.shape[0]
    k = np.clip(np.searchsorted(nodes, ts, side="right") - 1, 0, n - 2)
    t0, t1 = nodes[k], nodes[k + 1]
    frac = (ts - t0) / (t1 - t0)
    out = curve.right[k] + frac[:, None] * (curve.left[k + 1] - curve.right[k])

    hit = np.searchsorted(nodes, ts, side="left")
    hit = np.clip(hit, 0, n - 1)
    on_node = nodes[hit] == ts
    if on_node.any():
        h = hit[on_node]
        if side == "left":
            vals = curve.left[h]
        elif side == "right":
            vals = curve.right[h]
        else:
            vals = (1.0 - theta) * curve.left[h] + theta * curve.right[h]
        out[on_node] = vals
    return out[0] if scalar else out


def length(curve: SbvCurve) -> float:
    """Total variation: segment lengths plus jump magnitudes."""
    seg = np.linalg.norm(curve.segment_vectors(), axis=1).sum()
    jmp = np.linalg.norm(curve.jump_vectors(), axis=1).sum()
    return float(seg + jmp)


def jump_set(curve: SbvCurve) -> List[Tuple[float, np.ndarray]]:
    mask = curve.jump_mask
    jumps = curve.jump_vectors()
    return [(float(curve.t[i]), jumps[i]) for i in np.flatnonzero(mask)]


class Decomposition(NamedTuple):
    ac: SbvCurve
    jump: SbvCurve


def decompose(curve: SbvCurve) -> Decomposition:
    """Split into an absolutely continuous part and a piecewise-constant jump part.

    The continuous part starts at ``c(0)``, the jump part at the origin.
    """
    seg = curve.segment_vectors()
    ac_vals = np.empty_like(curve.left)
    ac_vals[0] = curve.right[0]
    ac_vals[1:] = curve.right[0] + np.cumsum(seg, axis=0)
    jumps = curve.jump_vectors()
    after = np.cumsum(jumps, axis=0)
    before = after - jumps
    return Decomposition(SbvCurve(curve.t, ac_vals, ac_vals), SbvCurve(curve.t, before, after))


def normalize_bv0(curve: SbvCurve) -> SbvCurve:
    """Translate so that the right limit at 0 is the origin."""
    shift = curve.right[0]
    return SbvCurve(curve.t, curve.left - shift, curve.right - shift)


def translate(curve: SbvCurve, offset) -> SbvCurve:
    offset = np.asarray(offset, dtype=float)
    return SbvCurve(curve.t, curve.left + offset, curve.right + offset)


def scale(curve: SbvCurve, factor: float) -> SbvCurve:
    return SbvCurve(curve.t, curve.left * factor, curve.right * factor)


def arclength_fractions(curve: SbvCurve) -> Tuple[np.ndarray, float]:
    """Cumulative length fraction at each node of a continuous curve, and the length."""
    seg = np.linalg.norm(curve.segment_vectors(), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = float(cum[-1])
    if total <= 0.0:
        return np.zeros_like(cum), 0.0
    frac = cum / total
    frac[-1] = 1.0
    return frac, total


def constant_speed(curve: SbvCurve, tol: float = 0.0) -> SbvCurve:
    """Reparametrise a continuous curve by normalised arclength.

    Nodes whose preceding segments have length at most ``tol * length`` are
    dropped, which collapses stationary pieces.
    """
    require_continuous(curve, "constant_speed")
    frac, total = arclength_fractions(curve)
    if total <= 0.0:
        raise ZeroLengthError("constant_speed requires a curve of positive length")
    keep = [0]
    for k in range(1, curve.n_nodes):
        if frac[k] - frac[keep[-1]] > tol:
            keep.append(k)
    if keep[-1] != curve.n_nodes - 1:
        if len(keep) == 1:
            keep.append(curve.n_nodes - 1)
        else:
            keep[-1] = curve.n_nodes - 1
    keep = np.asarray(keep)
    t = frac[keep]
    t[-1] = 1.0
    vals = curve.left[keep]
    return SbvCurve(t, vals, vals)
