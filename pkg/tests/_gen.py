"""Random curve generators and fixtures shared by the test modules."""
import numpy as np

from srvbv.curve import SbvCurve
from srvbv.gtransform import Reparam


def segment(a=(0.0, 0.0), b=(1.0, 0.0)):
    return SbvCurve.polyline([a, b])


def step(x=0.5, v=(1.0, 0.0), start=(0.0, 0.0)):
    s = np.asarray(start, dtype=float)
    e = s + np.asarray(v, dtype=float)
    return SbvCurve([0.0, x, 1.0], [s, s, e], [s, e, e])


def l_shape():
    return SbvCurve.from_points([0.0, 0.5, 1.0], [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])


def ramp_plus_step():
    """Segment [0,0] -> [1,0] with a jump [0,1] at t = 0.5."""
    return SbvCurve([0.0, 0.5, 1.0], [[0, 0], [0.5, 0], [1, 1]], [[0, 0], [0.5, 1], [1, 1]])


def random_params(rng, k, denom=16):
    """``k`` pieces with node parameters on a dyadic grid, so curves often share nodes."""
    k = min(k, denom)
    inner = np.sort(rng.choice(np.arange(1, denom), k - 1, replace=False)) / denom
    return np.concatenate([[0.0], inner, [1.0]])


def random_ac(rng, d=2, max_nodes=10, denom=16):
    k = int(rng.integers(1, max_nodes))
    t = random_params(rng, k, denom)
    return SbvCurve.from_points(t, rng.normal(size=(t.shape[0], d)))


def random_sbv(rng, d=2, max_pieces=6, max_jumps=3, denom=16):
    k = int(rng.integers(1, max_pieces + 1))
    t = random_params(rng, k, denom)
    n = t.shape[0]
    left = rng.normal(size=(n, d))
    right = left.copy()
    n_jumps = int(rng.integers(0, max_jumps + 1))
    if n_jumps and n > 1:
        where = rng.choice(np.arange(1, n), min(n_jumps, n - 1), replace=False)
        right[where] = left[where] + rng.normal(size=(where.shape[0], d))
    # occasionally a constant piece
    if n > 2 and rng.random() < 0.2:
        j = int(rng.integers(1, n - 1))
        jump = right[j] - left[j]
        left[j] = right[j - 1]
        right[j] = left[j] + jump
    return SbvCurve(t, left, right)


def random_strict_reparam(rng, n_knots=None):
    n = int(n_knots or rng.integers(2, 8))
    x = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 0.95, n - 2)), [1.0]])
    x = np.unique(x)
    steps = rng.uniform(0.2, 1.0, x.shape[0] - 1)
    y = np.concatenate([[0.0], np.cumsum(steps) / steps.sum()])
    y[-1] = 1.0
    return Reparam(x, y)


def random_reparam(rng):
    """Element of the closure: may contain plateaus."""
    x = np.unique(np.concatenate([[0.0, 1.0], rng.uniform(0.05, 0.95, int(rng.integers(0, 6)))]))
    steps = rng.uniform(0.0, 1.0, x.shape[0] - 1)
    steps[rng.random(steps.shape[0]) < 0.3] = 0.0
    if steps.sum() == 0:
        steps[-1] = 1.0
    y = np.concatenate([[0.0], np.cumsum(steps) / steps.sum()])
    y[-1] = 1.0
    return Reparam(x, y)
