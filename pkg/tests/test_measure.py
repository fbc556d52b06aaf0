import math

import numpy as np
import pytest

from _gen import random_sbv, ramp_plus_step, segment, step
from srvbv.curve import length
from srvbv.exceptions import DimensionMismatchError
from srvbv.measure import PiecewiseMeasure, common_refinement, derivative, f_c, s_hat_measure


def measure(bp, dens, locs=(), weights=()):
    d = np.asarray(dens, dtype=float).reshape(len(bp) - 1, -1).shape[1]
    return PiecewiseMeasure(bp, dens, list(locs), np.asarray(weights, dtype=float).reshape(-1, d))


def atom(x, w):
    return measure([0.0, 1.0], [[0.0] * len(w)], [x], [w])


def test_derivative_segment():
    m = derivative(segment())
    np.testing.assert_array_equal(m.densities, [[1.0, 0.0]])
    assert m.atom_locations.size == 0


def test_derivative_step():
    m = derivative(step())
    np.testing.assert_array_equal(m.densities, [[0.0, 0.0], [0.0, 0.0]])
    np.testing.assert_array_equal(m.atom_locations, [0.5])
    np.testing.assert_array_equal(m.atom_weights, [[1.0, 0.0]])


def test_derivative_ramp_plus_step():
    m = derivative(ramp_plus_step())
    np.testing.assert_array_equal(m.densities, [[1.0, 0.0], [1.0, 0.0]])
    np.testing.assert_array_equal(m.atom_weights, [[0.0, 1.0]])


def test_total_variation_equals_length(rng):
    for _ in range(100):
        c = random_sbv(rng)
        assert abs(derivative(c).total_variation - length(c)) <= 1e-12


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(bp=[0.0, 0.6, 0.5, 1.0], dens=[[1.0]] * 3),
        dict(bp=[0.0, 1.0], dens=[[1.0]], locs=[0.5, 0.5], weights=[[1.0], [2.0]]),
        dict(bp=[0.0, 1.0], dens=[[1.0]], locs=[0.5], weights=[[0.0]]),
        dict(bp=[0.1, 1.0], dens=[[1.0]]),
    ],
)
def test_measure_invariants_enforced(kwargs):
    with pytest.raises(ValueError):
        measure(**kwargs)


def test_common_refinement_breakpoints_and_atoms():
    m1 = measure([0.0, 0.5, 1.0], [[1.0], [2.0]], [0.5], [[1.0]])
    m2 = measure([0.0, 0.25, 1.0], [[3.0], [4.0]], [0.5, 0.75], [[2.0], [5.0]])
    r = common_refinement(m1, m2)
    np.testing.assert_array_equal(r.breakpoints, [0.0, 0.25, 0.5, 1.0])
    np.testing.assert_array_equal(r.density1[:, 0], [1.0, 1.0, 2.0])
    np.testing.assert_array_equal(r.density2[:, 0], [3.0, 4.0, 4.0])
    np.testing.assert_array_equal(r.atom_locations, [0.5, 0.75])
    np.testing.assert_array_equal(r.atom1[:, 0], [1.0, 0.0])
    np.testing.assert_array_equal(r.atom2[:, 0], [2.0, 5.0])


def test_common_refinement_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        common_refinement(derivative(segment()), measure([0.0, 1.0], [[1.0]]))


def test_s_hat_measure_examples():
    m = measure([0.0, 1.0], [[1.0, 0.0]])
    assert s_hat_measure(m, m) == 1.0
    assert s_hat_measure(atom(0.5, [1.0, 0.0]), atom(0.5, [-1.0, 0.0])) == 0.0
    assert s_hat_measure(m, atom(0.5, [1.0, 0.0])) == 0.0
    assert s_hat_measure(atom(0.5, [3.0, 0.0]), atom(0.5, [0.0, 4.0])) == 0.0
    # <[3,0]/3, [3,4]/5> = 3/5 and sqrt(3 * 5)
    assert abs(s_hat_measure(atom(0.5, [3.0, 0.0]), atom(0.5, [3.0, 4.0])) - 0.6 * math.sqrt(15)) <= 1e-15


def test_s_hat_measure_properties(rng):
    for _ in range(200):
        m1 = derivative(random_sbv(rng))
        m2 = derivative(random_sbv(rng))
        s = s_hat_measure(m1, m2)
        assert s == s_hat_measure(m2, m1)
        assert abs(s_hat_measure(m1, m1) - m1.total_variation) <= 1e-12
        assert 0.0 <= s <= math.sqrt(m1.total_variation * m2.total_variation) + 1e-12
        lam, mu = rng.uniform(0.1, 5.0, 2)
        assert abs(s_hat_measure(m1.scaled(lam), m2.scaled(mu)) - math.sqrt(lam * mu) * s) <= 1e-12 * max(1.0, s)


def _unit(rng, d=2):
    v = rng.normal(size=d)
    return v / np.linalg.norm(v)


def test_f_c_examples():
    e = np.array([1.0, 0.0])
    assert f_c(0.5, e, e) == -0.5
    for t in (0.0, 0.3, 1.0):
        assert f_c(t, e, -e) == 0.0
    assert f_c(0.0, e, e) == 0.0 and f_c(1.0, e, e) == 0.0


def test_f_c_errors():
    with pytest.raises(ValueError):
        f_c(0.5, [2.0, 0.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        f_c(1.5, [1.0, 0.0], [1.0, 0.0])


def test_f_c_convex_in_t(rng):
    for _ in range(100):
        xi, ze = _unit(rng), _unit(rng)
        t1, t2, th = rng.uniform(size=3)
        lhs = f_c(th * t1 + (1 - th) * t2, xi, ze)
        assert lhs <= th * f_c(t1, xi, ze) + (1 - th) * f_c(t2, xi, ze) + 1e-12


def test_f_c_equals_unrelaxed_when_aligned(rng):
    for _ in range(100):
        xi, ze = _unit(rng), _unit(rng)
        t = rng.uniform()
        dot = float(np.dot(xi, ze))
        if dot >= 0:
            assert abs(f_c(t, xi, ze) + dot * math.sqrt(t * (1 - t))) <= 1e-15
