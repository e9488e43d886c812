"""Metric components, the curvature engine and self-duality."""
import numpy as np
import pytest

from sdmono.curvature import curvature, euclidean_metric, round_sphere_metric
from sdmono.metric import (
    conformal_factor,
    joyce_coordinates,
    joyce_inverse,
    metric_at,
    sample_chart_points,
    scalar_curvature,
    self_duality,
    weyl_decomposition,
)
from sdmono.monopole import ChartPoint, MonopoleConfig


def test_far_field_metric(pair):
    m = metric_at(pair, ChartPoint(2, 1e4, 0.3, 1.0, 0.1))
    r = 1e4
    assert np.allclose(np.diag(m.g) / np.array([1, r * r, 1, 1]), 1, atol=1e-6)


def test_joyce_coordinates():
    assert np.allclose(joyce_coordinates(1.0, 1.0), (0, 2))
    assert np.allclose(joyce_coordinates(2.0, 1.0), (3, 4))
    assert conformal_factor(1.0, 1.0) == pytest.approx(8)
    assert conformal_factor(2.0, 1.0) == pytest.approx(20)
    assert np.allclose(joyce_inverse(3.0, 4.0), (2.0, 1.0))
    with pytest.raises(ValueError):
        joyce_coordinates(0.0, 1.0)


def test_engine_flat_and_sphere(rng):
    x = rng.uniform(0.3, 1.2, size=(10, 4))
    flat = curvature(euclidean_metric, x)
    assert np.abs(flat.scalar).max() == 0
    sph = curvature(round_sphere_metric, x)
    assert max(sph.weyl_plus_norm.max(), sph.weyl_minus_norm.max()) < 1e-10
    assert np.abs(sph.bianchi_residual()).max() < 1e-8


def test_single_monopole_scalar_flat():
    assert abs(scalar_curvature(MonopoleConfig.from_heights([1.0]), ChartPoint(2, 1.0, 0.0, 1.2, 0.0))) < 1e-7


def test_pair_self_dual(pair):
    reps = weyl_decomposition(pair, sample_chart_points(pair, 50, 1))
    assert max(abs(r.scalar) for r in reps) < 1e-7
    v = self_duality(reps)
    assert v.consistent and v.max_ratio < 1e-5


def test_fd_oracle_agrees(pair):
    pts = sample_chart_points(pair, 5, 2)
    a = weyl_decomposition(pair, pts)
    b = weyl_decomposition(pair, pts, method="fd")
    for x, y in zip(a, b):
        assert abs(x.scalar - y.scalar) < 1e-4
