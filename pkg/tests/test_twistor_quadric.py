"""The quadric pair, its automorphisms and the Einstein-Weyl layer."""
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from sdmono import exact as ex
from sdmono import twistor as tw

phase = st.floats(0, 2 * np.pi).map(lambda t: complex(np.exp(1j * t)))
kinds = st.sampled_from(["diag", "offdiag"])


def test_moduli_oracle(poon):
    assert poon.alpha == pytest.approx(0.70710678, abs=1e-8)
    assert poon.beta == pytest.approx(1.22474487, abs=1e-8)
    with pytest.raises(ValueError):
        tw.build_poon_model(2.5)


def test_nodes(poon):
    for p in poon.singular_points.values():
        assert np.abs(poon.residual(p)).max() < 1e-14
        assert poon.jacobian_rank(p) == 1


def test_real_structure(poon):
    e = np.eye(6)
    assert np.allclose(tw.real_structure(e[0]), e[1])
    X = tw.sample_variety(poon, 30, 0)
    assert np.abs(poon.residual(X)).max() < 1e-10
    assert np.abs(poon.residual(tw.real_structure(X))).max() < 1e-10


def test_torus_identity():
    assert np.allclose(tw.torus_action(1, 1).U, np.eye(6))


@settings(max_examples=30, deadline=None)
@given(phase, phase, kinds, st.sampled_from(["I", "J"]), kinds)
def test_case_one_on_constraint(a, b, x, mid, y):
    m = tw.build_poon_model(1.75)
    U = tw.case_one(a, b, x, mid, y)
    assert tw.span_preserved(U, m) and tw.commutes_with_sigma(U)
    assert tw.classify_component(U) == ("I", x, mid, y)


@settings(max_examples=30, deadline=None)
@given(phase, phase, kinds, st.sampled_from(["+", "-"]), kinds, st.floats(1e-3, 0.2))
def test_case_two_constraint(a, b, x, mid, y, eps):
    m = tw.build_poon_model(1.75)
    U = tw.case_two(m, m.beta * a, m.alpha * b, x, mid, y)
    assert tw.span_preserved(U, m) and tw.commutes_with_sigma(U)
    assert not tw.span_preserved(tw.case_two(m, (1 + eps) * m.beta * a, m.alpha * b, x, mid, y), m)


def test_span_examples(poon):
    assert tw.span_preserved(tw.case_one(np.exp(1j * np.pi / 7), np.exp(-1j / 3)), poon)
    assert not tw.span_preserved(tw.case_one(1.001, 1.0), poon)
    assert tw.span_preserved(tw.case_two(poon, poon.beta, poon.alpha, c=1j), poon)


def test_components(poon, rng):
    keys = tw.all_component_keys()
    assert len(keys) == 16
    for key in keys:
        U = tw.component_representative(poon, key, rng)
        assert tw.span_preserved(U, poon) and tw.maps_singular_set(U, poon)


def test_conic_permutations(poon):
    assert tw.conic_set_preserved(np.eye(6), poon).perm == {k: k for k in ("tl1", "tl2", "tl3", "tl4")}
    assert tw.conic_set_preserved(tw.U0, poon).perm == {"tl1": "tl2", "tl2": "tl1", "tl3": "tl4", "tl4": "tl3"}
    p = tw.conic_set_preserved(tw.lambda_matrix(poon), poon).perm
    assert {p["tl1"], p["tl2"]} == {"tl3", "tl4"} and {p["tl3"], p["tl4"]} == {"tl1", "tl2"}


def test_exact_span(poon):
    lam = sp.Rational(7, 4)
    reps = ex.exact_component_representatives(lam)
    assert len(reps) == 16 and all(ex.exact_span_preserved(U, lam) for U in reps.values())
    assert not ex.exact_span_preserved(ex.exact_case_one(sp.Rational(1001, 1000), 1), lam)
    with pytest.raises(TypeError):
        ex.exact_span_preserved(np.eye(6), lam)


def test_projection_images(poon):
    X = tw.sample_variety(poon, 40, 1)
    for side in (1, 3):
        q = tw.image_quadric(side, poon)
        P = tw.minitwistor_projection(side, X)
        assert np.abs(q(P / np.linalg.norm(P, axis=-1, keepdims=True))).max() < 1e-9
        assert np.linalg.matrix_rank(q.M) == 4


def test_admissibility_examples(poon):
    assert tw.ew_admissible(1, 0.0, 0j, poon)
    assert not tw.ew_admissible(1, 1 / poon.alpha, 0j, poon)
    assert tw.ew_admissible(3, 2 / poon.beta, 0j, poon)


@settings(max_examples=100, deadline=None)
@given(st.floats(-2.5, 2.5), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_regions_match_real_points(b, cr, ci):
    m = tw.build_poon_model(1.75)
    c = complex(cr, ci)
    for side in (1, 3):
        assert tw.ew_admissible(side, b, c, m) != tw.real_point_test(tw.EWPoint(side, b, c), m).has_real_point


def test_dual_action(poon):
    with pytest.raises(ZeroDivisionError):
        tw.lambda_dual_action(0.0, 1j, poon)
    _, c = tw.lambda_dual_action(1.0, 1.0, poon)
    assert np.angle(c) == pytest.approx(-np.pi / 2)
    _, c = tw.lambda_dual_action(1.0, 1j, poon)
    assert np.angle(c) == pytest.approx(0.0, abs=1e-15)
    sh = tw.angular_shift_check(poon)
    assert sh.constant == pytest.approx(1.5 * np.pi, abs=1e-12) and sh.max_spread < 1e-12


def test_plane_action_differs_by_sign_and_rotation(poon, rng):
    for _ in range(10):
        b3, c3 = rng.uniform(0.2, 2), complex(*rng.normal(size=2))
        b, c = tw.lambda_dual_action(b3, c3, poon)
        bp, cp = tw.lambda_plane_action(b3, c3, poon)
        assert bp == pytest.approx(-b) and cp == pytest.approx(1j * c)


def test_semifree_census():
    assert tw.semifree_circle_subgroups(2) == ["{s=1}", "{t=s}"]
    for n in range(3, 7):
        assert len(tw.semifree_circle_subgroups(n)) == 1
    assert not tw.is_semifree(tw.subgroup_weights(5, "t=s^k", 3))
    with pytest.raises(ValueError):
        tw.semifree_circle_subgroups(1)
