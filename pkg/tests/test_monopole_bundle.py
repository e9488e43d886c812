"""Green's function, connection potential, charts and the curvature identity."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdmono.hyperbolic import HyperbolicPoint
from sdmono.monopole import (
    ChartDomainError,
    MonopoleConfig,
    SingularityError,
    change_chart,
    chart_connection,
    connection_potential_fc,
    green,
    halton_rz,
    potential_V,
    star_dV,
    transition,
    verify_curvature_identity,
)

# frozen oracle values
GREEN_111 = 0.17082039324993694  # bracket 5/9 in the closed form
FC_111 = -0.22360679774997896  # -1/(2 sqrt 5)

pos = st.floats(0.05, 5.0)


def test_green_oracles():
    assert green(1.0, 1.0, 1.0) == pytest.approx(GREEN_111, rel=1e-15)
    assert 0 < green(1.0, 1e3, 1.0) < 1e-5
    with pytest.raises(SingularityError):
        green(1.0, 0.0, 1.0)


def test_connection_potential_oracles():
    assert connection_potential_fc(1.0, 1.0, 1.0) == pytest.approx(FC_111, rel=1e-15)
    assert connection_potential_fc(1.0, 0.0, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert connection_potential_fc(1.0, 1e6, 1.0) == pytest.approx(-0.5, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(pos, pos, pos, st.floats(0.2, 5.0))
def test_scale_equivariance(c, r, z, lam):
    assert green(lam * c, lam * r, lam * z) == pytest.approx(green(c, r, z), rel=1e-9, abs=1e-12)
    assert connection_potential_fc(lam * c, lam * r, lam * z) == pytest.approx(connection_potential_fc(c, r, z), rel=1e-9, abs=1e-12)


def test_potential_V():
    one = MonopoleConfig.from_heights([1.0])
    assert potential_V(one, HyperbolicPoint(1, 0, 1)) == pytest.approx(1 + GREEN_111, rel=1e-14)
    two = MonopoleConfig.from_heights([1.0, 2.0])
    assert potential_V(two, HyperbolicPoint(1e4, 0, 1)) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(SingularityError):
        potential_V(two, HyperbolicPoint(0, 0, 2.0))


def test_chart_coefficients_on_axis(pair):
    c1, c2 = pair.heights
    assert chart_connection(pair, 2, 0.0, (c1 + c2) / 2) == pytest.approx(0, abs=1e-15)
    assert chart_connection(pair, 1, 0.0, c1 / 2) == pytest.approx(0, abs=1e-15)
    assert chart_connection(pair, 3, 0.0, 2 * c2) == pytest.approx(0, abs=1e-15)
    assert [pair.chart_constant(j) for j in pair.charts] == [-1, 0, 1]
    with pytest.raises(ChartDomainError):
        chart_connection(pair, 1, 0.0, 1.5)
    with pytest.raises(ChartDomainError):
        pair.check_chart(4)


def test_chart_coefficient_vanishes_on_interval(pair):
    r = np.array([1e-3, 1e-4, 1e-5])
    assert np.all(np.abs(chart_connection(pair, 2, r, 1.5)) < 10 * r**2)


def test_transition_examples():
    assert transition(2, 2, 0.4) == 0
    assert transition(1, 2, np.pi / 3) == pytest.approx(np.pi / 3)
    assert transition(3, 2, np.pi / 3) == pytest.approx(-np.pi / 3)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 2 * np.pi), st.integers(1, 3), st.integers(1, 3))
def test_cocycle(th, i, j):
    assert transition(i, j, th) + transition(j, i, th) == pytest.approx(0, abs=1e-12)
    assert transition(1, i, th) + transition(i, j, th) == pytest.approx(transition(1, j, th), abs=1e-12)


def test_change_chart_round_trip(pair, rng):
    pts = np.column_stack([rng.uniform(0.2, 3, 20), rng.uniform(0, 6, 20), rng.uniform(0.2, 3, 20), rng.uniform(0, 6, 20)])
    back = change_chart(pair, 3, 1, change_chart(pair, 1, 3, pts))
    assert np.allclose(back, pts, atol=1e-14)


def test_star_dV_decays(pair):
    far = star_dV(pair, np.array([1e4]), np.array([1.0]))
    assert abs(far.dr_dth[0]) < 1e-6 and abs(far.dz_dth[0]) < 1e-6


@pytest.mark.parametrize("heights", [[1.0], [1.0, 2.0], [1.0, 2.0, 8.0]])
def test_curvature_identity(heights):
    rep = verify_curvature_identity(MonopoleConfig.from_heights(heights), halton_rz(1000, 3))
    assert rep.residual_dual < 1e-9
    assert rep.residual_fd < 1e-4


def test_identity_detects_wrong_potential(pair):
    # adding a z-dependent term to f must break the identity
    class Broken(MonopoleConfig):
        def f(self, r, z):
            return super().f(r, z) + 0.01 * z

    bad = Broken(pair.points)
    assert verify_curvature_identity(bad, halton_rz(50, 0)).residual_dual > 1e-4
