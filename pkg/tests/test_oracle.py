import itertools
import math

import numpy as np
import pytest

from _gen import l_shape, ramp_plus_step, random_sbv, segment, step
from srvbv.curve import SbvCurve, length
from srvbv.exceptions import CurveError, EnumerationLimitError
from srvbv.matching import GridConfig, match_dp
from srvbv.oracle import (
    brute_force_match,
    count_paths,
    lemma_mu_opt,
    lemma_objective,
    recovery_eps_max,
    recovery_pair,
    strict_limit_check,
    verify_relaxation,
)
from srvbv.relax import s_hat
from srvbv.srvt import s_functional

BACK = segment((1, 0), (0, 0))


# -- recovery pairs -----------------------------------------------------------


@pytest.mark.parametrize("eps", [0.3, 0.1, 1e-2, 1e-4])
def test_recovery_parallel_common_jump(eps):
    r1, r2 = recovery_pair(step(), step(), eps)
    assert r1.is_continuous and r2.is_continuous
    assert s_functional(r1, r2) == 1.0 == s_hat(step(), step())


@pytest.mark.parametrize("eps", [0.3, 0.1, 1e-2, 1e-4])
def test_recovery_antiparallel_common_jump(eps):
    a, b = step(), step(v=(-1.0, 0.0))
    r1, r2 = recovery_pair(a, b, eps)
    assert s_functional(r1, r2) == 0.0 == s_hat(a, b)


def test_recovery_of_ac_inputs_is_identity():
    a, b = l_shape(), segment((0, 0), (1, 1))
    r1, r2 = recovery_pair(a, b, 0.1)
    assert r1 is a and r2 is b
    # opposing continuous pieces are only rewritten on request
    r1, r2 = recovery_pair(segment(), BACK, 0.1, split_obtuse=False)
    assert r1 == segment() and r2 == BACK
    r1, r2 = recovery_pair(segment(), BACK, 0.1)
    assert s_functional(r1, r2) == 0.0


def test_recovery_eps_bounds():
    assert recovery_eps_max(step(0.3), step(0.7)) == 0.5
    assert recovery_eps_max(segment(), l_shape()) == 1.0
    for bad in (0.5, 0.7, 0.0, -1e-3):
        with pytest.raises(ValueError):
            recovery_pair(step(0.3), step(0.7), bad)


def test_recovery_preserves_length_and_converges(rng):
    for _ in range(50):
        a, b = random_sbv(rng), random_sbv(rng)
        eps_list = [e for e in (1e-1, 1e-2, 1e-3) if e < recovery_eps_max(a, b)]
        seq = [recovery_pair(a, b, e) for e in eps_list]
        for r1, r2 in seq:
            assert abs(length(r1) - length(a)) <= 1e-12
            assert abs(length(r2) - length(b)) <= 1e-12
            assert r1.is_continuous and r2.is_continuous
        ts = rng.uniform(0, 1, 50)
        ts = ts[~np.isin(ts, np.union1d(a.t, b.t))]
        rep = strict_limit_check([p[0] for p in seq], a, ts, tol=0.2)
        assert rep.length_converged
        # deviation is driven by the compressed time, which shrinks with eps
        assert rep.pointwise[-1] <= rep.pointwise[0] + 1e-12


# -- verify_relaxation ------------------------------------------------------------


def test_verify_identical_steps():
    rep = verify_relaxation(step(), step())
    assert rep.s_values == (1.0,) * 4
    assert rep.final_gap == 0.0 and rep.passed


def test_verify_orthogonal_steps():
    rep = verify_relaxation(step(), step(v=(0.0, 1.0)))
    assert rep.s_hat_target == 0.0
    assert all(v == 0.0 for v in rep.s_values)
    assert rep.final_gap == 0.0


def test_verify_ramp_plus_step_mixed_signs():
    other = SbvCurve([0.0, 0.5, 1.0], [[0, 0], [0.5, -0.5], [-1, 0]], [[0, 0], [0.5, 0.5], [-1, 0]])
    rep = verify_relaxation(ramp_plus_step(), other)
    assert rep.passed
    assert rep.final_gap < 1e-3
    assert rep.max_overshoot == max(v - rep.s_hat_target for v in rep.s_values)


def test_verify_random_pairs(rng):
    for _ in range(50):
        rep = verify_relaxation(random_sbv(rng), random_sbv(rng))
        assert rep.max_overshoot <= 1e-8
        assert rep.final_gap < 1e-3


@pytest.mark.parametrize("schedule", [(), (1e-2, 1e-1), (1e-1, 1e-1), (1e-1, -1e-2)])
def test_verify_rejects_bad_schedule(schedule):
    with pytest.raises(ValueError):
        verify_relaxation(step(), step(), schedule)


# -- strict_limit_check ----------------------------------------------------------


def test_strict_limit_constant_sequence():
    rep = strict_limit_check([l_shape()] * 3, l_shape(), [0.1, 0.6, 0.9])
    assert rep.pointwise == (0.0, 0.0, 0.0) and rep.length_gaps == (0.0, 0.0, 0.0)
    assert rep.passed


def test_strict_limit_recovery_deviation_is_order_eps():
    c = step()
    eps = [1e-1, 1e-2, 1e-3]
    seq = [recovery_pair(c, c, e)[0] for e in eps]
    rep = strict_limit_check(seq, c, [0.2, 0.45, 0.7, 0.9])
    # the jump of size 1 is opened over width eps; points before it stretch by at most eps
    for e, dev in zip(eps, rep.pointwise):
        assert dev <= e + 1e-12
    assert rep.passed


def test_strict_limit_skipped_jump_fails_length():
    # pointwise close away from the jump, but the jump has been dropped
    skipped = SbvCurve.from_points([0.0, 0.5, 1.0], [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    seq = [SbvCurve.from_points([0.0, 0.5, 0.5 + e, 1.0], [[0, 0], [0, 0], [1, 0], [1, 0]]) for e in (0.1, 0.01)]
    rep = strict_limit_check(seq + [SbvCurve.from_points([0, 1], [[0, 0], [0, 0]])], step(), [0.2])
    assert rep.pointwise_converged and not rep.length_converged and not rep.passed
    assert length(skipped) == 1.0


def test_strict_limit_rejects_jump_samples():
    with pytest.raises(ValueError):
        strict_limit_check([step()], step(), [0.2, 0.5])


# -- brute force ---------------------------------------------------------------


def test_count_paths_small():
    # Delannoy-like counts for arbitrary forward moves
    assert count_paths(1, 1) == 1
    assert count_paths(2, 2) == 3
    assert count_paths(8, 8) == 3112896


def test_brute_force_examples():
    assert brute_force_match(segment(), segment(), 5, 5) == 1.0
    assert brute_force_match(segment(), BACK, 5, 5) == 0.0


def test_brute_force_limit():
    with pytest.raises(EnumerationLimitError):
        brute_force_match(segment(), segment(), 9, 9)
    with pytest.raises(EnumerationLimitError):
        brute_force_match(segment(), segment(), 5, 5, limit=100)
    with pytest.raises(CurveError):
        brute_force_match(step(), segment(), 4, 4)


def test_brute_force_equals_dp_window_5(rng):
    for _ in range(10):
        a = SbvCurve.from_points(np.linspace(0, 1, 6)[[0, 2, 5]], rng.normal(size=(3, 2)))
        b = SbvCurve.from_points(np.linspace(0, 1, 6)[[0, 3, 5]], rng.normal(size=(3, 2)))
        assert match_dp(a, b, GridConfig(n1=6, n2=6, window=5)).s_star == brute_force_match(a, b, 6, 6)


# -- measure lemma --------------------------------------------------------------


def test_lemma_examples():
    mu, f = lemma_mu_opt([1, 1], [1, 1])
    np.testing.assert_array_equal(mu, [0.5, 0.5])
    assert f == math.sqrt(2)
    mu, f = lemma_mu_opt([1, 0], [1, 1])
    np.testing.assert_array_equal(mu, [1.0, 0.0])
    mu, f = lemma_mu_opt([1, 2, 1], [2, 1, 0])
    np.testing.assert_allclose(mu, [2 / 3, 1 / 3, 0.0], rtol=0, atol=1e-15)
    assert abs(f - math.sqrt(6)) <= 1e-15
    assert abs(lemma_objective(mu, [1, 2, 1], [2, 1, 0]) - f) <= 1e-12


def test_lemma_simplex_grid_search():
    nu, g = np.array([1.0, 2.0, 1.0]), np.array([2.0, 1.0, 0.0])
    k = np.arange(1001) / 1000.0
    m0, m1 = np.meshgrid(k, k, indexing="ij")
    ok = m0 + m1 <= 1.0 + 1e-12
    m0, m1 = m0[ok], m1[ok]
    m2 = np.clip(1.0 - m0 - m1, 0.0, None)
    vals = g[0] * np.sqrt(m0 * nu[0]) + g[1] * np.sqrt(m1 * nu[1]) + g[2] * np.sqrt(m2 * nu[2])
    best = np.argmax(vals)
    mu, f = lemma_mu_opt(nu, g)
    assert abs(vals[best] - f) < 1e-2
    np.testing.assert_allclose([m0[best], m1[best], m2[best]], mu, atol=1e-2)


def test_lemma_trivial_functional():
    mu, f = lemma_mu_opt([1, 1, 0], [0, 0, 3])
    assert f == 0.0
    np.testing.assert_array_equal(mu, np.full(3, 1 / 3))


@pytest.mark.parametrize("nu, g", [([1, -1], [1, 1]), ([1, 1], [1, -1]), ([0, 0], [1, 1]), ([1, 1], [1]), ([[1]], [[1]])])
def test_lemma_errors(nu, g):
    with pytest.raises(ValueError):
        lemma_mu_opt(nu, g)


def test_lemma_beats_random_feasible(rng):
    for _ in range(20):
        n = int(rng.integers(1, 5))
        nu = rng.uniform(0, 1, n) * (rng.random(n) < 0.8)
        if nu.sum() == 0:
            nu[0] = 1.0
        g = rng.uniform(0, 2, n)
        mu, f = lemma_mu_opt(nu, g)
        trials = rng.dirichlet(np.ones(n), size=10000)
        vals = (g * np.sqrt(trials * nu)).sum(axis=1)
        assert vals.max() <= f + 1e-12
        assert np.all(mu[nu == 0] == 0.0)
        assert abs(mu.sum() - 1.0) <= 1e-12
