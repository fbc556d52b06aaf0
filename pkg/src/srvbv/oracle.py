"""Independent checks for the relaxation, the DP and the measure lemma.

Nothing here is used by the main code paths; these are the references the
test-suite compares against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .curve import SbvCurve, check_curve, check_same_dimension, evaluate, length, require_continuous
from .exceptions import EnumerationLimitError
from .matching import build_grid, corner_mask
from .relax import s_hat
from .srvt import s_functional

PATH_LIMIT = 10**7


# -- recovery sequences ------------------------------------------------------


def recovery_eps_max(c1: SbvCurve, c2: SbvCurve) -> float:
    """Exclusive upper bound on ``eps``: all jump windows together must fit in ``[0, 1)``."""
    n_jumps = np.union1d(c1.t[c1.jump_mask], c2.t[c2.jump_mask]).shape[0]
    return 1.0 / n_jumps if n_jumps else 1.0


def _dot(u, v) -> float:
    return float(np.dot(u, v))


def recovery_pair(c1: SbvCurve, c2: SbvCurve, eps: float, split_obtuse: bool = True):
    """Continuous pair converging strictly to ``(c1, c2)`` whose similarity is the relaxed one.

    Every jump parameter (of either curve) gets a window of width ``eps``; the
    continuous pieces are compressed uniformly to make room.  Inside a window
    co-directional jumps are opened as simultaneous ramps and opposing jumps
    as consecutive ramps.  With ``split_obtuse`` the continuous pieces whose
    directions oppose each other are cut into cells of width at most ``eps``
    in which the two curves move in turn, so the two never move together
    against each other.  Images and lengths are unchanged.
    """
    check_same_dimension(c1, c2)
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    eps_max = recovery_eps_max(c1, c2)
    if eps >= eps_max:
        raise ValueError(f"eps = {eps!r} too large; need eps < {eps_max!r}")
    taus = np.union1d(c1.t, c2.t)
    L1 = evaluate(c1, taus, side="left")
    R1 = evaluate(c1, taus, side="right")
    L2 = evaluate(c2, taus, side="left")
    R2 = evaluate(c2, taus, side="right")
    J1, J2 = R1 - L1, R2 - L2
    jump = np.any(J1 != 0.0, axis=1) | np.any(J2 != 0.0, axis=1)
    D1, D2 = L1[1:] - R1[:-1], L2[1:] - R2[:-1]
    obtuse = np.einsum("ij,ij->i", D1, D2) < 0.0
    if not jump.any() and not (split_obtuse and obtuse.any()):
        return c1, c2
    kappa = 1.0 - eps * jump.sum()

    ys: List[np.ndarray] = [np.zeros(1)]
    v1: List[np.ndarray] = [R1[:1] if not jump[0] else L1[:1]]
    v2: List[np.ndarray] = [R2[:1] if not jump[0] else L2[:1]]
    y = 0.0
    for k in range(taus.shape[0]):
        if jump[k]:
            a, b = J1[k], J2[k]
            if _dot(a, b) < 0.0:
                ys.append(np.array([y + 0.5 * eps, y + eps]))
                v1.append(np.array([R1[k], R1[k]]))
                v2.append(np.array([L2[k], R2[k]]))
            else:
                ys.append(np.array([y + eps]))
                v1.append(R1[k][None])
                v2.append(R2[k][None])
            y += eps
        if k == taus.shape[0] - 1:
            break
        dur = kappa * (taus[k + 1] - taus[k])
        if split_obtuse and obtuse[k]:
            m = max(1, math.ceil(dur / eps))
            r = np.arange(m)
            w = dur / m
            starts = y + r * w
            cell_y = np.empty(2 * m)
            cell_y[0::2] = starts + 0.5 * w
            cell_y[1::2] = starts + w
            f_now = ((r + 1) / m)[:, None]
            f_prev = (r / m)[:, None]
            p1 = np.empty((2 * m, c1.dimension))
            p2 = np.empty((2 * m, c2.dimension))
            p1[0::2] = R1[k] + f_now * D1[k]
            p1[1::2] = R1[k] + f_now * D1[k]
            p2[0::2] = R2[k] + f_prev * D2[k]
            p2[1::2] = R2[k] + f_now * D2[k]
            p1[-1], p2[-1] = L1[k + 1], L2[k + 1]
            p1[-2] = L1[k + 1]
            ys.append(cell_y)
            v1.append(p1)
            v2.append(p2)
        else:
            ys.append(np.array([y + dur]))
            v1.append(L1[k + 1][None])
            v2.append(L2[k + 1][None])
        y += dur
    t = np.concatenate(ys)
    t[-1] = 1.0
    keep = np.concatenate([[True], np.diff(t) > 0])
    if not keep.all():
        raise ArithmeticError("recovery knots collapsed; eps too small for the floating-point grid")
    return SbvCurve.from_points(t, np.concatenate(v1)), SbvCurve.from_points(t, np.concatenate(v2))


@dataclass(frozen=True)
class ApproxReport:
    epsilons: Tuple[float, ...]
    s_values: Tuple[float, ...]
    s_hat_target: float
    max_overshoot: float
    final_gap: float
    overshoot_tol: float = 1e-8

    @property
    def passed(self) -> bool:
        return self.max_overshoot <= self.overshoot_tol


def verify_relaxation(c1: SbvCurve, c2: SbvCurve, eps_schedule=(1e-1, 1e-2, 1e-3, 1e-4)) -> ApproxReport:
    """Evaluate the classical similarity along a recovery sequence and compare with ``s_hat``."""
    eps = [float(e) for e in eps_schedule]
    if not eps or any(e <= 0.0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps schedule must be positive and strictly decreasing")
    target = s_hat(c1, c2)
    values = tuple(s_functional(*recovery_pair(c1, c2, e)) for e in eps)
    return ApproxReport(
        epsilons=tuple(eps),
        s_values=values,
        s_hat_target=target,
        max_overshoot=max(v - target for v in values),
        final_gap=abs(values[-1] - target),
    )


# -- strict convergence -------------------------------------------------------


@dataclass(frozen=True)
class StrictLimitReport:
    pointwise: Tuple[float, ...]
    length_gaps: Tuple[float, ...]
    tol: float

    @property
    def pointwise_converged(self) -> bool:
        return self.pointwise[-1] <= self.tol

    @property
    def length_converged(self) -> bool:
        return self.length_gaps[-1] <= self.tol

    @property
    def passed(self) -> bool:
        return self.pointwise_converged and self.length_converged


def strict_limit_check(
    sequence: Sequence[SbvCurve],
    limit: SbvCurve,
    sample_ts,
    tol: float = 1e-2,
    offsets: Optional[Sequence[float]] = None,
) -> StrictLimitReport:
    """Pointwise and length deviations of each member from ``limit``.

    ``offsets`` optionally shifts the sample parameters per member, for
    sequences that converge only after a time shift.  The verdict looks at the
    last member.
    """
    ts = np.asarray(sample_ts, dtype=float)
    hits = np.isin(ts, limit.t[limit.jump_mask])
    if hits.any():
        raise ValueError(f"sample parameters {ts[hits].tolist()} are jump parameters of the limit")
    if not len(sequence):
        raise ValueError("empty sequence")
    target = evaluate(limit, ts)
    target_len = length(limit)
    dev, gaps = [], []
    for k, ck in enumerate(sequence):
        shift = 0.0 if offsets is None else offsets[k]
        pts = evaluate(ck, np.clip(ts + shift, 0.0, 1.0))
        dev.append(float(np.max(np.linalg.norm(pts - target, axis=1))))
        gaps.append(abs(length(ck) - target_len))
    return StrictLimitReport(tuple(dev), tuple(gaps), tol)


# -- exhaustive path enumeration ---------------------------------------------


def _edge_cost(da: Sequence[float], db: Sequence[float]) -> float:
    # same operation order as the vectorised DP costs, for bitwise agreement
    dot = 0.0
    na = 0.0
    nb = 0.0
    for x, y in zip(da, db):
        dot = dot + x * y
        na = na + x * x
        nb = nb + y * y
    na, nb = math.sqrt(na), math.sqrt(nb)
    prod = na * nb
    if dot > 0.0 and prod > 0.0:
        return dot / math.sqrt(prod)
    return 0.0


def _allowed(k, i, nodes, cross_nodes):
    return cross_nodes or not any(nodes[k + 1 : i])


def count_paths(n1: int, n2: int) -> int:
    """Number of monotone paths from corner to corner with arbitrary forward moves."""

    @lru_cache(maxsize=None)
    def f(i, j):
        if i == 0 and j == 0:
            return 1
        return sum(f(a, b) for a in range(i + 1) for b in range(j + 1) if (a, b) != (i, j))

    return f(n1 - 1, n2 - 1)


def brute_force_match(
    a: SbvCurve,
    b: SbvCurve,
    n1: int,
    n2: int,
    cross_nodes: bool = False,
    limit: int = PATH_LIMIT,
) -> float:
    """Best edge-cost sum over every monotone lattice path, with no window.

    Grids are built exactly like those of the DP.  The sums of all paths are
    carried explicitly (no dynamic-programming shortcut), so the size is
    checked against ``limit`` first.
    """
    check_curve(a), check_curve(b)
    require_continuous(a, "brute_force_match")
    require_continuous(b, "brute_force_match")
    check_same_dimension(a, b)
    g1, g2 = build_grid(a, n1), build_grid(b, n2)
    m1, m2 = g1.shape[0], g2.shape[0]
    total = count_paths(m1, m2)
    if total >= limit:
        raise EnumerationLimitError(f"{total} monotone paths on a {m1}x{m2} grid exceed the limit {limit}")
    A = evaluate(a, g1).tolist()
    B = evaluate(b, g2).tolist()
    na = corner_mask(a, g1).tolist()
    nb = corner_mask(b, g2).tolist()

    sums = {(0, 0): [np.zeros(1)]}
    for k in range(m1):
        for l in range(m2):
            if (k, l) == (m1 - 1, m2 - 1):
                break
            here = np.concatenate(sums.pop((k, l)))
            for i in range(k, m1):
                for j in range(l, m2):
                    if (i, j) == (k, l):
                        continue
                    if i == k or j == l:
                        cost = 0.0
                    elif _allowed(k, i, na, cross_nodes) and _allowed(l, j, nb, cross_nodes):
                        da = [x - y for x, y in zip(A[i], A[k])]
                        db = [x - y for x, y in zip(B[j], B[l])]
                        cost = _edge_cost(da, db)
                    else:
                        continue
                    sums.setdefault((i, j), []).append(here + cost)
    return float(np.concatenate(sums[(m1 - 1, m2 - 1)]).max())


# -- measure lemma ------------------------------------------------------------


def lemma_objective(mu, nu, g) -> float:
    """``sum g_i sqrt(mu_i nu_i)``."""
    return float(np.sum(np.asarray(g) * np.sqrt(np.asarray(mu) * np.asarray(nu))))


def lemma_mu_opt(nu, g) -> Tuple[np.ndarray, float]:
    """Maximiser over probability vectors ``mu`` of ``sum g_i sqrt(mu_i nu_i)``.

    By Cauchy-Schwarz the optimum is ``mu_i = g_i^2 nu_i / sum g^2 nu`` with
    value ``sqrt(sum g^2 nu)``.  If that sum vanishes every ``mu`` scores 0 and
    the uniform vector is returned.
    """
    nu = np.asarray(nu, dtype=float)
    g = np.asarray(g, dtype=float)
    if nu.shape != g.shape or nu.ndim != 1:
        raise ValueError("nu and g must be 1-d arrays of equal length")
    if np.any(nu < 0) or np.any(g < 0):
        raise ValueError("weights must be nonnegative")
    if not nu.sum() > 0:
        raise ValueError("nu must have positive mass")
    w = g * g * nu
    total = w.sum()
    if total == 0.0:
        return np.full(nu.shape, 1.0 / nu.shape[0]), 0.0
    return w / total, float(math.sqrt(total))
