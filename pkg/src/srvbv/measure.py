"""Derivative measures of piecewise-linear SBV curves and the relaxed pairing.

A :class:`PiecewiseMeasure` is a vector measure on ``[0, 1]`` made of a
piecewise-constant density plus finitely many atoms.  This is exactly the
class of derivatives of the curves in :mod:`srvbv.curve`, and it is the class
on which the Radon-Nikodym quotients of the relaxed functional have a closed
form on every piece of a common refinement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .curve import SbvCurve
from .exceptions import DimensionMismatchError


def _frozen(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PiecewiseMeasure:
    breakpoints: np.ndarray
    densities: np.ndarray
    atom_locations: np.ndarray
    atom_weights: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        dens = np.asarray(self.densities, dtype=float)
        locs = np.asarray(self.atom_locations, dtype=float).reshape(-1)
        if dens.ndim == 1:
            dens = dens[:, None]
        d = dens.shape[1]
        w = np.asarray(self.atom_weights, dtype=float).reshape(-1, d)
        if bp.ndim != 1 or bp.shape[0] != dens.shape[0] + 1 or bp.shape[0] < 2:
            raise ValueError("need one density per breakpoint interval")
        if bp[0] != 0.0 or bp[-1] != 1.0 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if locs.shape[0] != w.shape[0]:
            raise ValueError("one weight per atom location")
        if np.any((locs < 0.0) | (locs > 1.0)):
            raise ValueError("atom locations must lie in [0, 1]")
        if np.unique(locs).shape[0] != locs.shape[0]:
            raise ValueError("atom locations must be pairwise distinct")
        if np.any(np.all(w == 0.0, axis=1)):
            raise ValueError("atom weights must be nonzero")
        order = np.argsort(locs, kind="stable")
        object.__setattr__(self, "breakpoints", _frozen(bp))
        object.__setattr__(self, "densities", _frozen(dens))
        object.__setattr__(self, "atom_locations", _frozen(locs[order]))
        object.__setattr__(self, "atom_weights", _frozen(w[order]))

    @property
    def dimension(self) -> int:
        return self.densities.shape[1]

    @property
    def total_variation(self) -> float:
        widths = np.diff(self.breakpoints)
        dens = (np.linalg.norm(self.densities, axis=1) * widths).sum()
        return float(dens + np.linalg.norm(self.atom_weights, axis=1).sum())

    def scaled(self, factor: float) -> "PiecewiseMeasure":
        return PiecewiseMeasure(
            self.breakpoints, self.densities * factor, self.atom_locations, self.atom_weights * factor
        )


def derivative(curve: SbvCurve) -> PiecewiseMeasure:
    """Weak derivative: segment slopes as density, jumps as atoms."""
    dt = np.diff(curve.t)
    dens = curve.segment_vectors() / dt[:, None]
    mask = curve.jump_mask
    return PiecewiseMeasure(curve.t, dens, curve.t[mask], curve.jump_vectors()[mask])


class Refinement(NamedTuple):
    breakpoints: np.ndarray
    density1: np.ndarray
    density2: np.ndarray
    atom_locations: np.ndarray
    atom1: np.ndarray
    atom2: np.ndarray


def common_refinement(m1: PiecewiseMeasure, m2: PiecewiseMeasure) -> Refinement:
    """Align two measures on the union of their breakpoints and atom locations.

    Atoms are matched by exact location; a missing side gets the zero vector.
    """
    if m1.dimension != m2.dimension:
        raise DimensionMismatchError(f"dimension mismatch: {m1.dimension} vs {m2.dimension}")
    bp = np.union1d(m1.breakpoints, m2.breakpoints)
    mid = 0.5 * (bp[:-1] + bp[1:])

    def dens_on(m):
        k = np.searchsorted(m.breakpoints, mid, side="right") - 1
        return m.densities[k]

    locs = np.union1d(m1.atom_locations, m2.atom_locations)

    def atoms_on(m):
        w = np.zeros((locs.shape[0], m.dimension))
        idx = np.searchsorted(locs, m.atom_locations)
        w[idx] = m.atom_weights
        return w

    return Refinement(bp, dens_on(m1), dens_on(m2), locs, atoms_on(m1), atoms_on(m2))


def pairing_density(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Row-wise ``<u/|u|, v/|v|>^+ sqrt(|u| |v|)``, zero where either side vanishes.

    Written so that swapping ``u`` and ``v`` gives bitwise identical output.
    """
    dot = np.zeros(u.shape[0])
    nu = np.zeros(u.shape[0])
    nv = np.zeros(u.shape[0])
    for k in range(u.shape[1]):
        dot = dot + u[:, k] * v[:, k]
        nu = nu + u[:, k] * u[:, k]
        nv = nv + v[:, k] * v[:, k]
    nu = np.sqrt(nu)
    nv = np.sqrt(nv)
    ok = (dot > 0.0) & (nu > 0.0) & (nv > 0.0)
    out = np.zeros(u.shape[0])
    out[ok] = dot[ok] / np.sqrt(nu[ok] * nv[ok])
    return out


def s_hat_measure(m1: PiecewiseMeasure, m2: PiecewiseMeasure) -> float:
    """Relaxed SRV pairing of two derivative measures.

    On every refined interval the Radon-Nikodym quotients are constant, so the
    integrand reduces to the geometric pairing of the two densities times the
    interval width; co-located atoms contribute the same pairing of their
    weights.  Mutually singular pieces contribute nothing.
    """
    r = common_refinement(m1, m2)
    widths = np.diff(r.breakpoints)
    ac = (pairing_density(r.density1, r.density2) * widths).sum()
    jumps = pairing_density(r.atom1, r.atom2).sum()
    return float(ac + jumps)


def f_c(t: float, xi, zeta) -> float:
    """Convex hull in ``t`` of ``-<xi, zeta> sqrt(t (1 - t))`` for unit vectors."""
    xi = np.asarray(xi, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    if abs(np.linalg.norm(xi) - 1.0) > 1e-9 or abs(np.linalg.norm(zeta) - 1.0) > 1e-9:
        raise ValueError("xi and zeta must be unit vectors")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    return -max(float(np.dot(xi, zeta)), 0.0) * float(np.sqrt(t * (1.0 - t)))
