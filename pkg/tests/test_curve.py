import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import l_shape, ramp_plus_step, random_sbv, segment, step
from srvbv.curve import (
    SbvCurve,
    Node,
    check_curve,
    constant_speed,
    decompose,
    evaluate,
    jump_set,
    length,
    normalize_bv0,
    validate,
)
from srvbv.exceptions import CurveError, InvalidCurveError, ZeroLengthError


# -- validate -------------------------------------------------------------


def test_validate_segment_is_clean():
    assert validate(segment()) == []


def test_validate_reports_monotonicity_at_index_2():
    c = SbvCurve.from_points([0.0, 0.5, 0.4, 1.0], np.zeros((4, 2)))
    out = validate(c)
    assert [(v.index, v.rule) for v in out] == [(2, "monotonicity")]
    assert str(out[0]).startswith("node 2:")


def test_validate_reports_first_node_jump():
    c = SbvCurve([0.0, 1.0], [[0, 0], [1, 0]], [[1, 0], [1, 0]])
    assert [v.rule for v in validate(c)] == ["first-node-jump"]


@pytest.mark.parametrize(
    "t, rule",
    [([0.1, 1.0], "start"), ([0.0, 0.9], "end"), ([0.0, 1.5], "range"), ([0.0, np.nan], "finite")],
)
def test_validate_endpoint_rules(t, rule):
    c = SbvCurve.from_points(t, np.zeros((2, 1)))
    assert rule in [v.rule for v in validate(c)]


def test_validate_single_node():
    assert "node-count" in [v.rule for v in validate(SbvCurve.from_points([0.0], [[0.0]]))]


def test_check_curve_raises_with_violations():
    with pytest.raises(InvalidCurveError) as exc:
        check_curve(SbvCurve.from_points([0.0, 0.5, 0.4, 1.0], np.zeros((4, 2))))
    assert exc.value.violations[0].index == 2


def test_shape_mismatch_rejected_at_construction():
    with pytest.raises(CurveError):
        SbvCurve([0.0, 1.0], np.zeros((2, 2)), np.zeros((3, 2)))


def test_arrays_are_read_only():
    c = segment()
    with pytest.raises(ValueError):
        c.left[0, 0] = 3.0


def test_nodes_roundtrip_and_jump_flag():
    c = step()
    assert [n.is_jump for n in c.nodes] == [False, True, False]
    assert SbvCurve.from_nodes(c.nodes) == c
    assert Node(0.0, np.zeros(1), np.ones(1)).is_jump


# -- evaluation ------------------------------------------------------------


def test_eval_affine_interpolation():
    c = SbvCurve.polyline([[0, 0], [2, 0]])
    np.testing.assert_array_equal(evaluate(c, 0.25), [0.5, 0.0])


def test_eval_sides_at_jump():
    c = step()
    np.testing.assert_array_equal(evaluate(c, 0.5, side="interior", theta=0.5), [0.5, 0.0])
    np.testing.assert_array_equal(evaluate(c, 0.5, side="left"), [0.0, 0.0])
    np.testing.assert_array_equal(evaluate(c, 0.5, side="right"), [1.0, 0.0])


def test_eval_rejects_outside_parameter():
    with pytest.raises(CurveError):
        evaluate(segment(), 1.2)
    with pytest.raises(ValueError):
        evaluate(segment(), 0.5, side="interior", theta=2.0)


def test_eval_vectorised_matches_scalar(rng):
    c = random_sbv(rng)
    ts = np.concatenate([c.t, rng.uniform(0, 1, 20)])
    vec = evaluate(c, ts, side="left")
    for t, v in zip(ts, vec):
        np.testing.assert_array_equal(evaluate(c, t, side="left"), v)


def test_interior_lies_on_jump_segment(rng):
    for _ in range(50):
        c = random_sbv(rng)
        theta = rng.uniform()
        ts = np.concatenate([c.t, rng.uniform(0, 1, 10)])
        a = evaluate(c, ts, side="left")
        b = evaluate(c, ts, side="right")
        p = evaluate(c, ts, side="interior", theta=theta)
        ab = b - a
        den = np.maximum((ab * ab).sum(axis=1), 1e-300)
        s = np.clip(((p - a) * ab).sum(axis=1) / den, 0, 1)
        assert np.max(np.linalg.norm(p - (a + s[:, None] * ab), axis=1)) <= 1e-12


# -- length, jumps, decomposition ------------------------------------------


def test_lengths_of_fixtures():
    assert length(segment()) == 1.0
    assert length(step()) == 1.0
    assert length(l_shape()) == 2.0
    assert length(SbvCurve.from_points([0.0, 1.0], [[2.0, 2.0], [2.0, 2.0]])) == 0.0


def test_jump_set():
    assert jump_set(segment()) == []
    [(t, v)] = jump_set(step())
    assert t == 0.5 and np.array_equal(v, [1.0, 0.0])
    c = SbvCurve([0, 0.25, 0.75, 1], [[0], [0], [1], [3]], [[0], [1], [3], [3]])
    assert [t for t, _ in jump_set(c)] == [0.25, 0.75]


def test_decompose_ac_curve():
    ac, jp = decompose(l_shape())
    assert ac == l_shape()
    assert length(jp) == 0.0


def test_decompose_pure_step():
    ac, jp = decompose(step())
    assert length(ac) == 0.0
    assert jp == step()


def test_decompose_ramp_plus_step_pointwise():
    c = ramp_plus_step()
    ac, jp = decompose(c)
    assert ac.is_continuous
    assert length(ac) == 1.0 and length(jp) == 1.0
    ts = np.linspace(0, 1, 1000)
    for side in ("left", "right"):
        np.testing.assert_allclose(evaluate(ac, ts, side) + evaluate(jp, ts, side), evaluate(c, ts, side), atol=1e-15)
    np.testing.assert_array_equal(evaluate(jp, 0.0), [0.0, 0.0])


def test_decomposition_lengths_add_up(rng):
    for _ in range(100):
        c = random_sbv(rng)
        ac, jp = decompose(c)
        assert abs(length(ac) + length(jp) - length(c)) <= 1e-12
        assert np.allclose(ac.left + jp.left, c.left, atol=1e-12)
        assert np.allclose(ac.right + jp.right, c.right, atol=1e-12)


def test_normalize_bv0():
    c = SbvCurve.polyline([[3, 4], [4, 4], [4, 6]])
    n = normalize_bv0(c)
    np.testing.assert_array_equal(n.right[0], [0, 0])
    assert normalize_bv0(n) == n
    assert length(n) == length(c)


# -- constant speed ----------------------------------------------------------


def test_constant_speed_half_segment_at_09():
    c = SbvCurve.from_points([0.0, 0.9, 1.0], [[0, 0], [0.5, 0], [1, 0]])
    np.testing.assert_array_equal(constant_speed(c).t, [0.0, 0.5, 1.0])


def test_constant_speed_l_shape_corner():
    c = SbvCurve.from_points([0.0, 0.2, 1.0], [[0, 0], [1, 0], [1, 1]])
    cs = constant_speed(c)
    np.testing.assert_array_equal(cs.t, [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(cs.left, l_shape().left)


def test_constant_speed_collapses_stationary_piece():
    c = SbvCurve.from_points([0.0, 0.3, 0.6, 1.0], [[0, 0], [1, 0], [1, 0], [2, 0]])
    cs = constant_speed(c)
    np.testing.assert_array_equal(cs.t, [0.0, 0.5, 1.0])
    speeds = np.linalg.norm(cs.segment_vectors(), axis=1) / np.diff(cs.t)
    np.testing.assert_allclose(speeds, length(c), atol=1e-12)


def test_constant_speed_errors():
    with pytest.raises(ZeroLengthError):
        constant_speed(SbvCurve.from_points([0.0, 1.0], [[1.0], [1.0]]))
    with pytest.raises(CurveError):
        constant_speed(step())


points = st.lists(
    st.lists(st.integers(-40, 40).map(lambda v: v / 4), min_size=2, max_size=2), min_size=2, max_size=8
)


@settings(max_examples=60, deadline=None)
@given(points)
def test_constant_speed_idempotent_and_uniform(pts):
    c = SbvCurve.polyline(pts)
    if length(c) < 1e-6:
        return
    cs = constant_speed(c)
    again = constant_speed(cs)
    assert again.n_nodes == cs.n_nodes
    np.testing.assert_allclose(again.t, cs.t, atol=1e-12)
    np.testing.assert_array_equal(again.left, cs.left)
    speeds = np.linalg.norm(cs.segment_vectors(), axis=1) / np.diff(cs.t)
    np.testing.assert_allclose(speeds, length(c), rtol=1e-9)
