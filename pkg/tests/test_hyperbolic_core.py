"""Isometries, distances and geodesics of upper half space."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdmono.hyperbolic import (
    HyperbolicIsometry,
    HyperbolicPoint,
    Orientation,
    StabilizerClass,
    apply_isometry,
    common_geodesic,
    hyperbolic_distance,
    make_reflection_hemisphere,
    make_reflection_vertical_plane,
    make_rotation_about_z,
    make_translation,
    same_isometry,
    stabilizer_class,
)

P = HyperbolicPoint
coord = st.floats(-3, 3)
height = st.floats(0.1, 5)
points = st.builds(P, coord, coord, height)
angles = st.floats(0, 2 * np.pi)


def close(p, q, tol=1e-12):
    return np.allclose(p.as_array(), q.as_array(), atol=tol)


def test_identity_fixes_points():
    assert close(apply_isometry(HyperbolicIsometry(1, 0, 0, 1), P(0.3, -0.2, 1.5)), P(0.3, -0.2, 1.5))


def test_quaternion_rotation_oracle():
    th = np.pi / 2
    iso = HyperbolicIsometry(np.exp(1j * th / 2), 0, 0, np.exp(-1j * th / 2))
    assert close(apply_isometry(iso, P(1, 0, 1)), P(0, 1, 1))


def test_inversion_oracle():
    assert close(apply_isometry(HyperbolicIsometry(0, 1, -1, 0), P(0, 0, 2)), P(0, 0, 0.5))


def test_distance_oracles():
    assert hyperbolic_distance(P(0, 0, 1), P(0, 0, 1)) == 0
    assert hyperbolic_distance(P(0, 0, 1), P(0, 0, np.e)) == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(points, points, angles, st.complex_numbers(max_magnitude=2))
def test_distance_invariance(p, q, th, t):
    g = make_rotation_about_z(th).compose(make_translation(t))
    d = hyperbolic_distance(p, q)
    assert hyperbolic_distance(apply_isometry(g, p), apply_isometry(g, q)) == pytest.approx(d, rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(points, angles, st.complex_numbers(max_magnitude=2))
def test_compose_and_inverse(p, th, t):
    g = make_rotation_about_z(th).compose(make_translation(t))
    assert close(apply_isometry(g.inverse(), apply_isometry(g, p)), p, 1e-9)
    lhs = apply_isometry(g, p)
    rhs = apply_isometry(make_rotation_about_z(th), apply_isometry(make_translation(t), p))
    assert close(lhs, rhs, 1e-9)


@settings(max_examples=30, deadline=None)
@given(points, st.floats(0.2, 3))
def test_reflections_are_involutions(p, r):
    for refl in (make_reflection_hemisphere((0.1, -0.2), r), make_reflection_vertical_plane((1.0, 1.0), 0.3)):
        assert refl.orientation is Orientation.REVERSING
        assert close(apply_isometry(refl, apply_isometry(refl, p)), p, 1e-9)


def test_hemisphere_points_fixed():
    assert close(apply_isometry(make_reflection_hemisphere((0, 0), 2.0), P(0, 0, 2.0)), P(0, 0, 2.0))
    with pytest.raises(ValueError):
        make_reflection_hemisphere((0, 0), 0.0)


def test_rotation_by_zero_is_identity():
    assert same_isometry(make_rotation_about_z(0.0), HyperbolicIsometry(1, 0, 0, 1))


def test_common_geodesic_examples():
    g = common_geodesic([P(0, 0, 1), P(0, 0, 3)])
    assert g.vertical and np.allclose(g.foot, 0)
    g = common_geodesic([P(0, 0, 1), P(1, 0, 1)])
    ends = sorted(e.real for e in g.endpoints)
    # the semicircle through (0,0,1) and (1,0,1) ends at 1/2 -+ sqrt(5)/2
    assert np.allclose(ends, [0.5 - np.sqrt(5) / 2, 0.5 + np.sqrt(5) / 2], atol=1e-12)
    assert common_geodesic([P(0, 0, 1), P(0, 0, 2), P(1, 0, 1)]) is None
    with pytest.raises(ValueError):
        common_geodesic([P(0, 0, 1), P(0, 0, 1)])


def test_stabilizer_classes():
    assert stabilizer_class([P(0, 0, 1), P(0, 0, 4)]) is StabilizerClass.COLLINEAR_SYMMETRIC
    assert stabilizer_class([P(0, 0, 1), P(0, 0, 2), P(0, 0, 8)]) is StabilizerClass.COLLINEAR_ASYMMETRIC
    assert stabilizer_class([P(0, 0, 1), P(1, 0, 1), P(0, 1, 1)]) is StabilizerClass.NON_COLLINEAR
