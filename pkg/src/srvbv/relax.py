"""Relaxed SRV similarity and distance for curves with jumps.

``s_hat`` evaluates the closed form for SBV curves directly from the node
data (continuous part with a positive-part integrand plus the pairing of
jumps at common locations).  It deliberately does not go through
:mod:`srvbv.measure`, so the two can be checked against each other.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .curve import SbvCurve, check_same_dimension, length
from .gtransform import Reparam, bracket_representative


def _pos_pairing(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.zeros(u.shape[0])
    dot = np.zeros(u.shape[0])
    nu = np.zeros(u.shape[0])
    nv = np.zeros(u.shape[0])
    for k in range(u.shape[1]):
        dot = dot + u[:, k] * v[:, k]
        nu = nu + u[:, k] * u[:, k]
        nv = nv + v[:, k] * v[:, k]
    nu, nv = np.sqrt(nu), np.sqrt(nv)
    ok = (dot > 0.0) & (nu > 0.0) & (nv > 0.0)
    out[ok] = dot[ok] / np.sqrt(nu[ok] * nv[ok])
    return out


def _slopes_on(c: SbvCurve, grid: np.ndarray) -> np.ndarray:
    mid = 0.5 * (grid[:-1] + grid[1:])
    k = np.searchsorted(c.t, mid, side="right") - 1
    return c.segment_vectors()[k] / (c.t[k + 1] - c.t[k])[:, None]


def s_hat(c1: SbvCurve, c2: SbvCurve) -> float:
    """Relaxed similarity of two SBV curves."""
    check_same_dimension(c1, c2)
    grid = np.union1d(c1.t, c2.t)
    ac = (_pos_pairing(_slopes_on(c1, grid), _slopes_on(c2, grid)) * np.diff(grid)).sum()
    t1 = c1.t[c1.jump_mask]
    t2 = c2.t[c2.jump_mask]
    common = np.intersect1d(t1, t2)
    if common.size:
        j1 = c1.jump_vectors()[c1.jump_mask][np.searchsorted(t1, common)]
        j2 = c2.jump_vectors()[c2.jump_mask][np.searchsorted(t2, common)]
        jumps = _pos_pairing(j1, j2).sum()
    else:
        jumps = 0.0
    return float(ac + jumps)


def d_hat(c1: SbvCurve, c2: SbvCurve, rooted: bool = False) -> float:
    """``len1 + len2 - 2 s_hat``; with ``rooted=True`` the square root of its clamped value."""
    l1, l2 = length(c1), length(c2)
    val = l1 + l2 - 2.0 * s_hat(c1, c2)
    if abs(val) <= 8.0 * np.finfo(float).eps * (l1 + l2):
        val = 0.0
    if rooted:
        return float(np.sqrt(max(val, 0.0)))
    return float(val)


class BracketDistance(NamedTuple):
    value: float
    g1: SbvCurve
    g2: SbvCurve


def d_hat_bracket(c1: SbvCurve, phi1: Reparam, c2: SbvCurve, phi2: Reparam) -> BracketDistance:
    """Distance between the brackets ``[c1, phi1]`` and ``[c2, phi2]``.

    Only the canonical representatives (jumps traversed affinely over each
    resting interval) are considered.  This is the exact infimum whenever the
    opposing curve carries no aligned mass on those intervals, or both rest
    over the same interval; otherwise it is an upper bound.
    """
    check_same_dimension(c1, c2)
    g1 = bracket_representative(c1, phi1)
    g2 = bracket_representative(c2, phi2)
    return BracketDistance(d_hat(g1, g2), g1, g2)
