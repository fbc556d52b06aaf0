"""Optimal reparametrisation search and the shape distance.

The search runs on continuous curves only: both inputs are first replaced by
their jump embeddings, optionally brought to constant speed, and then matched
by dynamic programming over monotone lattice paths in the product of two
parameter grids.  An edge of a path pairs the chord increments of the two
curves with the relaxed (positive-part) integrand; edges with zero span on
one axis are resting moves and cost nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple

import numpy as np

from .curve import (
    SbvCurve,
    arclength_fractions,
    check_curve,
    check_same_dimension,
    constant_speed,
    evaluate,
    length,
    require_continuous,
)
from .exceptions import GridError
from .gtransform import Reparam, jump_embedding
from .relax import s_hat

_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class GridConfig:
    """Grid and search settings.

    ``n1``/``n2`` are the uniform point counts per axis (node parameters are
    always added), ``window`` bounds the index span of a single move.  With
    ``cross_nodes=False`` a move that advances on both axes may not pass over
    a node of either curve, which makes every edge cost exact.
    """

    n1: int = 33
    n2: int = 33
    window: int = 8
    refine_rounds: int = 1
    refine_factor: int = 2
    convergence_tol: float = 1e-9
    constant_speed: bool = True
    cross_nodes: bool = False
    seed_identity: bool = True

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise ValueError("grid sizes must be at least 2")
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if self.refine_rounds < 1 or self.refine_factor < 2:
            raise ValueError("need refine_rounds >= 1 and refine_factor >= 2")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")

    def sizes(self, round_index: int) -> Tuple[int, int]:
        f = self.refine_factor**round_index
        return (self.n1 - 1) * f + 1, (self.n2 - 1) * f + 1


@dataclass(frozen=True, eq=False)
class MatchResult:
    """Outcome of a matching run.

    ``psi1``/``psi2`` reparametrise ``curve1``/``curve2`` (the curves that were
    actually matched: the inputs of :func:`match_dp`, or the jump embeddings in
    :func:`shape_distance`).  ``phi1``/``phi2`` are the induced generalised
    reparametrisations of the original SBV curves.  ``rounds`` is the best
    value after each refinement round, ``grid_values`` the value found on
    each grid alone.
    """

    s_star: float
    d_shape: float
    psi1: Reparam
    psi2: Reparam
    curve1: SbvCurve
    curve2: SbvCurve
    length1: float
    length2: float
    phi1: Optional[Reparam] = None
    phi2: Optional[Reparam] = None
    path: Optional[np.ndarray] = None
    rounds: Tuple[float, ...] = ()
    grid_values: Tuple[float, ...] = ()
    grid_sizes: Tuple[Tuple[int, int], ...] = ()
    flags: Tuple[str, ...] = field(default=())

    @property
    def d_shape_rooted(self) -> float:
        return math.sqrt(max(self.d_shape, 0.0))


def build_grid(curve: SbvCurve, n: int, extra=()) -> np.ndarray:
    """Uniform grid of ``n`` points merged with the node parameters of ``curve``.

    Points closer than 1e-12 to an already kept point are dropped unless they
    are nodes, in which case they replace the non-node neighbour.
    """
    nodes = curve.t
    pts = np.union1d(np.union1d(np.linspace(0.0, 1.0, n), nodes), np.asarray(extra, dtype=float))
    pts = pts[(pts >= 0.0) & (pts <= 1.0)]
    is_node = np.isin(pts, nodes)
    kept: List[int] = []
    for i in range(pts.shape[0]):
        if kept and pts[i] - pts[kept[-1]] <= _MERGE_TOL:
            if is_node[i] and not is_node[kept[-1]]:
                kept[-1] = i
                continue
            if not (is_node[i] and is_node[kept[-1]]):
                continue
        kept.append(i)
    out = pts[kept]
    out[0], out[-1] = 0.0, 1.0
    return out


def corner_mask(curve: SbvCurve, grid: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Grid points that are interior nodes where the curve changes direction.

    Directions are compared between the nearest moving pieces on either side,
    so a turn hidden behind a stationary piece still counts.  Other nodes are
    not corners: across them the curve runs along one straight line.
    """
    seg = curve.segment_vectors()
    norms = np.linalg.norm(seg, axis=1)
    idx = np.arange(seg.shape[0])
    moving = norms > 0
    prev = np.maximum.accumulate(np.where(moving, idx, -1))[:-1]
    nxt = np.minimum.accumulate(np.where(moving, idx, seg.shape[0])[::-1])[::-1][1:]
    corner = np.zeros(prev.shape[0], dtype=bool)
    both = (prev >= 0) & (nxt < seg.shape[0])
    u, v = seg[prev[both]], seg[nxt[both]]
    nu, nv = norms[prev[both]], norms[nxt[both]]
    dot = (u * v).sum(axis=1)
    corner[both] = ~((dot > 0) & (nu * nv - dot <= tol * nu * nv))
    return np.isin(grid, curve.t[1:-1][corner])


def _move_list(window: int) -> np.ndarray:
    moves = [(a, b) for a in range(window + 1) for b in range(window + 1) if (a, b) != (0, 0)]
    # ties go to the move closest to the diagonal, then to the smallest predecessor index
    moves.sort(key=lambda m: (abs(m[0] - m[1]), -m[0], -m[1]))
    return np.array(moves, dtype=int)


def _increments(P: np.ndarray, step: int) -> np.ndarray:
    out = np.full_like(P, np.nan)
    if step < P.shape[0]:
        out[step:] = P[step:] - P[: P.shape[0] - step]
    return out


def edge_costs(A, B, nodes_a, nodes_b, moves, cross_nodes: bool) -> np.ndarray:
    """Cost of every move ending at every grid cell; ``-inf`` where the move is not allowed.

    Returns an array of shape ``(n1, n2, n_moves)``.
    """
    n1, n2 = A.shape[0], B.shape[0]
    pa = np.concatenate([[0], np.cumsum(nodes_a)])
    pb = np.concatenate([[0], np.cumsum(nodes_b)])
    out = np.full((n1, n2, moves.shape[0]), -np.inf)
    ii = np.arange(n1)
    jj = np.arange(n2)
    for m, (di, dj) in enumerate(moves):
        if di >= n1 or dj >= n2:
            continue
        if di == 0 or dj == 0:
            out[di:, dj:, m] = 0.0
            continue
        Da = _increments(A, di)[di:]
        Db = _increments(B, dj)[dj:]
        dot = np.zeros((Da.shape[0], Db.shape[0]))
        na = np.zeros(Da.shape[0])
        nb = np.zeros(Db.shape[0])
        for k in range(A.shape[1]):
            dot = dot + np.multiply.outer(Da[:, k], Db[:, k])
            na = na + Da[:, k] * Da[:, k]
            nb = nb + Db[:, k] * Db[:, k]
        na, nb = np.sqrt(na), np.sqrt(nb)
        prod = np.multiply.outer(na, nb)
        ok = (dot > 0.0) & (prod > 0.0)
        cost = np.zeros_like(dot)
        cost[ok] = dot[ok] / np.sqrt(prod[ok])
        if not cross_nodes:
            inner_a = pa[ii[di:]] - pa[ii[di:] - di + 1]
            inner_b = pb[jj[dj:]] - pb[jj[dj:] - dj + 1]
            blocked = np.add.outer(inner_a > 0, inner_b > 0)
            cost[blocked] = -np.inf
        out[di:, dj:, m] = cost
    return out


def _run_dp(costs: np.ndarray, moves: np.ndarray) -> Tuple[float, np.ndarray]:
    n1, n2, _ = costs.shape
    L = int(moves.max())
    V = np.full((n1 + L, n2 + L), -np.inf)
    V[L, L] = 0.0
    back = np.full((n1, n2), -1, dtype=int)
    di, dj = moves[:, 0], moves[:, 1]
    for i in range(n1):
        rows = i + L - di
        for j in range(n2):
            if i == 0 and j == 0:
                continue
            vals = V[rows, j + L - dj] + costs[i, j]
            m = int(np.argmax(vals))
            V[i + L, j + L] = vals[m]
            back[i, j] = m
    path = [(n1 - 1, n2 - 1)]
    i, j = n1 - 1, n2 - 1
    while (i, j) != (0, 0):
        m = back[i, j]
        i, j = i - di[m], j - dj[m]
        path.append((i, j))
    return float(V[n1 - 1 + L, n2 - 1 + L]), np.array(path[::-1], dtype=int)


def _joint_reparams(s: np.ndarray, t: np.ndarray) -> Tuple[Reparam, Reparam]:
    # normalisation psi1' + psi2' = 2: the joint parameter is the mean of both
    u = 0.5 * (s + t)
    u[0], u[-1] = 0.0, 1.0
    return Reparam(u, s), Reparam(u, t)


def _check_grid(curve: SbvCurve, grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid[0] != 0.0 or grid[-1] != 1.0 or np.any(np.diff(grid) <= 0):
        raise GridError("grid must increase strictly from 0 to 1")
    missing = ~np.isin(curve.t, grid)
    if missing.any():
        raise GridError(f"grid is missing node parameter(s) {curve.t[missing].tolist()}")
    return grid


def _arclength_fractions(curve: SbvCurve, x0: float, x1: float):
    inner = curve.t[(curve.t > x0) & (curve.t < x1)]
    xs = np.concatenate([[x0], inner, [x1]])
    cum = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(evaluate(curve, xs), axis=0), axis=1))])
    if cum[-1] == 0.0:
        return None
    frac = cum / cum[-1]
    frac[-1] = 1.0
    return xs, frac


def _proportional_path(a, b, s: np.ndarray, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Subdivide diagonal moves so both curves advance in equal arclength fractions.

    A move that crosses only straight nodes is scored by its chords; that
    value is realised when, inside the move, both curves cover the same
    fraction of their chord at all times (stationary stretches of one curve
    are passed while the other rests).
    """
    out_s, out_t = [s[0]], [t[0]]
    for k in range(1, s.shape[0]):
        s0, s1, t0, t1 = s[k - 1], s[k], t[k - 1], t[k]
        fa = _arclength_fractions(a, s0, s1) if s1 > s0 else None
        fb = _arclength_fractions(b, t0, t1) if t1 > t0 else None
        if fa is not None and fb is not None and (fa[0].shape[0] > 2 or fb[0].shape[0] > 2):
            for f in np.union1d(fa[1], fb[1]):
                alo, ahi = _preimage(f, *fa)
                blo, bhi = _preimage(f, *fb)
                for x, y in ((alo, blo), (ahi, bhi)):
                    if (x, y) != (out_s[-1], out_t[-1]):
                        out_s.append(x)
                        out_t.append(y)
        if (s1, t1) != (out_s[-1], out_t[-1]):
            out_s.append(s1)
            out_t.append(t1)
    return np.array(out_s), np.array(out_t)


def _match_on_grids(a, b, grid1, grid2, window, cross_nodes):
    moves = _move_list(window)
    A, B = evaluate(a, grid1), evaluate(b, grid2)
    costs = edge_costs(A, B, corner_mask(a, grid1), corner_mask(b, grid2), moves, cross_nodes)
    s_star, idx = _run_dp(costs, moves)
    s, t = _proportional_path(a, b, grid1[idx[:, 0]], grid2[idx[:, 1]])
    return s_star, s, t


def match_dp(a: SbvCurve, b: SbvCurve, cfg: GridConfig | None = None, grid1=None, grid2=None) -> MatchResult:
    """Maximise the relaxed pairing of two continuous curves over lattice paths."""
    cfg = cfg or GridConfig()
    check_curve(a), check_curve(b)
    require_continuous(a, "match_dp")
    require_continuous(b, "match_dp")
    check_same_dimension(a, b)
    grid1 = build_grid(a, cfg.n1) if grid1 is None else _check_grid(a, grid1)
    grid2 = build_grid(b, cfg.n2) if grid2 is None else _check_grid(b, grid2)
    s_star, s, t = _match_on_grids(a, b, grid1, grid2, cfg.window, cfg.cross_nodes)
    psi1, psi2 = _joint_reparams(s, t)
    l1, l2 = length(a), length(b)
    return MatchResult(
        s_star=s_star,
        d_shape=l1 + l2 - 2.0 * s_star,
        psi1=psi1,
        psi2=psi2,
        curve1=a,
        curve2=b,
        length1=l1,
        length2=l2,
        path=np.column_stack([s, t]),
        rounds=(s_star,),
        grid_values=(s_star,),
        grid_sizes=((grid1.shape[0], grid2.shape[0]),),
    )


def _refine_loop(run_round: Callable[[int, int], MatchResult], cfg: GridConfig, bound: float) -> MatchResult:
    # With a fixed window a finer grid does not contain every coarse path, so
    # the raw value of a round can drop; the best path seen so far is kept.
    raw: List[float] = []
    best_so_far: List[float] = []
    sizes = []
    best = None
    for r in range(cfg.refine_rounds):
        result = run_round(*cfg.sizes(r))
        raw.append(result.s_star)
        sizes.extend(result.grid_sizes)
        if best is None or result.s_star > best.s_star:
            best = result
        best_so_far.append(best.s_star)
        if best.s_star >= bound - cfg.convergence_tol:
            break
        if r > 0 and abs(raw[-1] - raw[-2]) < cfg.convergence_tol:
            break
    return replace(best, rounds=tuple(best_so_far), grid_values=tuple(raw), grid_sizes=tuple(sizes))


def refine(a: SbvCurve, b: SbvCurve, cfg: GridConfig | None = None) -> MatchResult:
    """Repeat :func:`match_dp` on grids refined by ``cfg.refine_factor``.

    Stops once the value of a round changes by less than ``convergence_tol``,
    reaches the Cauchy-Schwarz bound ``sqrt(len1 len2)``, or the rounds are
    used up.  The best path over all rounds is returned; ``rounds`` holds the
    best value after each round and ``grid_values`` the value of each grid.
    """
    cfg = cfg or GridConfig()
    bound = math.sqrt(length(a) * length(b))
    return _refine_loop(lambda n1, n2: match_dp(a, b, replace(cfg, n1=n1, n2=n2)), cfg, bound)


def _preimage(s: float, gx: np.ndarray, gy: np.ndarray) -> Tuple[float, float]:
    """Smallest and largest ``x`` with ``interp(x, gx, gy) == s`` for non-decreasing ``gy``."""
    n = gy.shape[0]
    k = int(np.searchsorted(gy, s, side="left"))
    if k < n and gy[k] == s:
        lo = gx[k]
    else:
        lo = gx[k - 1] + (s - gy[k - 1]) * (gx[k] - gx[k - 1]) / (gy[k] - gy[k - 1])
    k = int(np.searchsorted(gy, s, side="right")) - 1
    if gy[k] == s:
        hi = gx[k]
    else:
        hi = gx[k] + (s - gy[k]) * (gx[k + 1] - gx[k]) / (gy[k + 1] - gy[k])
    return float(lo), float(hi)


class _Prepared:
    """Jump embedding and working parametrisation of one input curve."""

    def __init__(self, c: SbvCurve, use_constant_speed: bool):
        self.original = c
        self.length = length(c)
        emb = jump_embedding(c)
        self.embedding = emb
        self.g = emb.curve
        if use_constant_speed:
            frac, _ = arclength_fractions(self.g)
            self.work = constant_speed(self.g)
            self.eta_x, self.eta_y = self.g.t, frac
        else:
            self.work = self.g
            self.eta_x = self.eta_y = None

    def to_work(self, g_param: np.ndarray) -> np.ndarray:
        if self.eta_x is None:
            return g_param
        return np.interp(g_param, self.eta_x, self.eta_y)

    def seeds(self, taus: np.ndarray) -> np.ndarray:
        xi_curve = self.embedding.xi
        pos = np.concatenate([evaluate(xi_curve, taus, side="left")[:, 0], evaluate(xi_curve, taus, side="right")[:, 0]])
        return self.to_work(pos)

    def to_g(self, s: float) -> Tuple[float, float]:
        if self.eta_x is None:
            return s, s
        return _preimage(s, self.eta_x, self.eta_y)


def _stationary_flag(c: SbvCurve, index: int) -> Optional[str]:
    if np.any(np.all(c.segment_vectors() == 0.0, axis=1)):
        return (
            f"curve {index} is stationary on a set of positive measure; "
            "quotient semantics per the G-equivalence only"
        )
    return None


def _decode_to_g(p1: _Prepared, p2: _Prepared, s: np.ndarray, t: np.ndarray):
    sig, tau = [], []
    for sm, tm in zip(s, t):
        lo1, hi1 = p1.to_g(sm)
        lo2, hi2 = p2.to_g(tm)
        if sig:
            # a stationary stretch is traversed once, on first arrival
            lo1, lo2 = max(lo1, sig[-1]), max(lo2, tau[-1])
            hi1, hi2 = max(hi1, lo1), max(hi2, lo2)
        for a, b in ((lo1, lo2), (hi1, lo2), (hi1, hi2)):
            if not sig or (a, b) != (sig[-1], tau[-1]):
                sig.append(a)
                tau.append(b)
    sig, tau = np.array(sig), np.array(tau)
    sig[0] = tau[0] = 0.0
    sig[-1] = tau[-1] = 1.0
    return sig, tau


def _identity_candidates(c1, c2, p1: _Prepared, p2: _Prepared):
    """The two identity pairings as (value, path in embedded parameters).

    Pairing the embeddings at equal parameters realises the relaxed similarity
    of the embeddings; pairing the originals at equal parameters (common jumps
    opened together, the rest against a resting partner) realises the relaxed
    similarity of the originals.  Either may beat a windowed DP path.
    """
    x = np.union1d(p1.g.t, p2.g.t)
    out = [(s_hat(p1.g, p2.g), x, x.copy())]
    taus = np.union1d(c1.t, c2.t)
    sig, tau = [], []
    for side in ("left", "right"):
        sig.append(evaluate(p1.embedding.xi, taus, side=side)[:, 0])
        tau.append(evaluate(p2.embedding.xi, taus, side=side)[:, 0])
    sig = np.column_stack(sig).ravel()
    tau = np.column_stack(tau).ravel()
    keep = np.concatenate([[True], (np.diff(sig) > 0) | (np.diff(tau) > 0)])
    out.append((s_hat(c1, c2), sig[keep], tau[keep]))
    return out


def _degenerate_result(c1: SbvCurve, c2: SbvCurve, l1: float, l2: float) -> MatchResult:
    ident = Reparam.identity()
    w1 = jump_embedding(c1).curve if l1 > 0 else c1
    w2 = jump_embedding(c2).curve if l2 > 0 else c2
    return MatchResult(
        s_star=0.0,
        d_shape=l1 + l2,
        psi1=ident,
        psi2=ident,
        curve1=w1,
        curve2=w2,
        length1=l1,
        length2=l2,
        phi1=ident,
        phi2=ident,
        path=np.array([[0.0, 0.0], [1.0, 1.0]]),
        rounds=(0.0,),
        grid_values=(0.0,),
        flags=("zero-length input",),
    )


def shape_distance(c1: SbvCurve, c2: SbvCurve, cfg: GridConfig | None = None) -> MatchResult:
    """Shape distance between the equivalence classes of two SBV curves.

    Both curves are replaced by their jump embeddings ``G(c_i)``; the optimal
    pair ``(psi1, psi2)`` is searched on refined grids and
    ``d_shape = len1 + len2 - 2 s_star``.  The induced reparametrisations of
    the originals are ``phi_i = zeta_i o psi_i``.  With ``seed_identity`` the
    two identity pairings are scored too and win when the windowed search
    falls below them, so ``d_shape <= d_hat(c1, c2)`` always holds.
    """
    cfg = cfg or GridConfig()
    check_curve(c1), check_curve(c2)
    check_same_dimension(c1, c2)
    l1, l2 = length(c1), length(c2)
    if l1 == 0.0 or l2 == 0.0:
        return _degenerate_result(c1, c2, l1, l2)
    p1 = _Prepared(c1, cfg.constant_speed)
    p2 = _Prepared(c2, cfg.constant_speed)
    flags = tuple(f for f in (_stationary_flag(c1, 1), _stationary_flag(c2, 2)) if f)
    # seeds make both identity pairings (in the original and in the embedded
    # parameter) representable on the grids
    taus = np.union1d(c1.t, c2.t)
    g_knots = np.union1d(p1.g.t, p2.g.t)
    seeds1 = np.union1d(p1.seeds(taus), p1.to_work(g_knots)) if cfg.seed_identity else ()
    seeds2 = np.union1d(p2.seeds(taus), p2.to_work(g_knots)) if cfg.seed_identity else ()
    if cfg.constant_speed:
        # equal arclength fractions are the natural partners of each other's nodes
        seeds1 = np.union1d(seeds1, p2.work.t)
        seeds2 = np.union1d(seeds2, p1.work.t)

    candidates = _identity_candidates(c1, c2, p1, p2) if cfg.seed_identity else []

    def run_round(n1: int, n2: int) -> MatchResult:
        grid1 = build_grid(p1.work, n1, seeds1)
        grid2 = build_grid(p2.work, n2, seeds2)
        s_star, s, t = _match_on_grids(p1.work, p2.work, grid1, grid2, cfg.window, cfg.cross_nodes)
        sig, tau = _decode_to_g(p1, p2, s, t)
        for value, cs, ct in candidates:
            if value > s_star:
                s_star, sig, tau = value, cs, ct
        psi1, psi2 = _joint_reparams(sig, tau)
        return MatchResult(
            s_star=s_star,
            d_shape=l1 + l2 - 2.0 * s_star,
            psi1=psi1,
            psi2=psi2,
            curve1=p1.g,
            curve2=p2.g,
            length1=l1,
            length2=l2,
            phi1=p1.embedding.zeta.compose(psi1),
            phi2=p2.embedding.zeta.compose(psi2),
            path=np.column_stack([sig, tau]),
            grid_sizes=((grid1.shape[0], grid2.shape[0]),),
            flags=flags,
        )

    return _refine_loop(run_round, cfg, math.sqrt(l1 * l2))


def correspondences(m: MatchResult, k: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """``k`` matched point pairs at uniformly spaced joint parameters."""
    if k < 1:
        raise ValueError("need at least one sample")
    u = np.linspace(0.0, 1.0, k) if k > 1 else np.zeros(1)
    p1 = evaluate(m.curve1, np.clip(m.psi1(u), 0.0, 1.0))
    p2 = evaluate(m.curve2, np.clip(m.psi2(u), 0.0, 1.0))
    return [(a, b) for a, b in zip(p1, p2)]
