"""Bundle lifts of hyperbolic isometries and their conformality."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdmono import groups
from sdmono.hyperbolic import HyperbolicPoint, make_rotation_about_z, make_translation
from sdmono.lift import (
    LiftError,
    extra_involution,
    fixed_axis_intervals,
    fixed_circle_of_varphi,
    fixed_points_in_fiber,
    identity_map,
    image_distance,
    lift_isometry,
    lift_rotation,
    lift_rotation_family,
    map_group,
    random_chart_points,
    reflection_generators,
    verify_conformal,
)
from sdmono.monopole import ChartPoint, MonopoleConfig
from sdmono.suites import conformal_error


@pytest.fixture(scope="module")
def pts():
    return random_chart_points(200, 11)


def test_identity_lift(pair, pts):
    m = lift_isometry(pair, make_rotation_about_z(0.0), ChartPoint(2, 1.0, 0.0, 1.5, 0.0))
    assert image_distance(m(pts), pts) < 1e-12
    r = verify_conformal(identity_map(pair), pair, pts)
    assert r.max_deviation < 1e-14 and np.allclose(r.factors, 1)


def test_lift_rejects_non_symmetry(pair):
    with pytest.raises(LiftError):
        lift_isometry(pair, make_translation(0.5), ChartPoint(2, 1.0, 0.0, 1.5, 0.0))


@settings(max_examples=15, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.sampled_from([-1, 0, 1]))
def test_rotation_family_homomorphism(a, b, k):
    pair = MonopoleConfig.from_heights([1.0, 2.0])
    fam = lift_rotation_family(pair, k)
    x = random_chart_points(20, 0)
    assert image_distance((fam(a) @ fam(b))(x), fam(a + b)(x)) < 1e-9


def test_fixed_interval_pattern(pair):
    assert fixed_axis_intervals(pair, -1) == [3]
    assert fixed_axis_intervals(pair, 0) == [2]
    assert fixed_axis_intervals(pair, 1) == [1]


def test_rotation_conformal(pair, pts):
    r = verify_conformal(lift_rotation(pair, 0, 0.9), pair, pts)
    assert r.max_deviation < 1e-8 and np.allclose(r.factors, 1, atol=1e-8)


@pytest.mark.parametrize("name", ["Phi1", "Phi2", "Phi3"])
def test_reflection_lifts_conformal(pair, pts, name):
    m = reflection_generators(pair)[name]
    assert conformal_error(m, pair, pts) < 1e-8
    assert image_distance((m @ m)(pts), pts) < 1e-9


def test_reflection_fibre_fixed_points(pair):
    phi3 = reflection_generators(pair)["Phi3"]
    assert fixed_points_in_fiber(phi3, HyperbolicPoint(1.0, 0.0, 1.37)).count == 2
    with pytest.raises(LiftError):
        fixed_points_in_fiber(phi3, HyperbolicPoint(0.0, 1.0, 1.37))


def test_reflection_group(pair):
    g = reflection_generators(pair)
    _, T = map_group(list(g.values()), identity_map(pair), random_chart_points(12, 0))
    assert groups.identify(T) == "Z2xZ2"


def test_asymmetric_triple_has_z2():
    mc = MonopoleConfig.from_heights([1.0, 2.0, 4.0 + 0.5])
    g = reflection_generators(mc)
    assert set(g) == {"Phi3"}
    _, T = map_group(list(g.values()), identity_map(mc), random_chart_points(12, 0))
    assert groups.identify(T) == "Z2"


@pytest.mark.parametrize("vartheta", [0.0, np.pi / 3])
def test_extra_involution(pair, pts, vartheta):
    L = extra_involution(pair, vartheta)
    assert verify_conformal(L, pair, pts).max_deviation < 1e-6
    assert image_distance((L @ L)(pts), pts) < 1e-10


def test_extra_involution_gives_d4(pair):
    g = reflection_generators(pair)
    _, T = map_group([g["Phi1"], g["Phi3"], extra_involution(pair, 0.0)], identity_map(pair), random_chart_points(12, 0))
    assert len(T) == 8 and groups.identify(T) == "D4"


def test_extra_involution_needs_pair():
    with pytest.raises(LiftError):
        extra_involution(MonopoleConfig.from_heights([1.0, 2.0, 4.0]))


def test_fixed_circle():
    fc = fixed_circle_of_varphi(1.0, 2.0)
    # centred at -c2^2 on the real line with radius 2 sqrt 3
    assert fc.center == pytest.approx(-4.0, abs=1e-12)
    assert fc.radius == pytest.approx(2 * np.sqrt(3), rel=1e-12)
    assert fc.hits_I1 == 1 and fc.hits_I3 == 1
