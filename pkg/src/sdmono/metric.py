"""The LeBrun hyperbolic monopole metric on the free locus.

In chart ``j`` with coordinates ``(r, theta3, z, theta1)``

    g = V (dr^2 + r^2 dtheta3^2 + dz^2) + z^2 V^{-1} (ft dtheta3 + dtheta1)^2,

``ft = k_j + f``.  The Cartesian frame ``(x, y, z, theta1)`` replaces
``ft dtheta3`` by ``B (x dy - y dx)`` with ``B = ft / r^2``, which is smooth
across the interval ``I_j`` of the axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .curvature import Curvature, curvature
from .monopole import ChartDomainError, ChartPoint, MonopoleConfig

CYLINDRICAL = "cylindrical"
CARTESIAN = "cartesian"
R_MIN = 0.05
TOL_CURV = 1e-7
TOL_CURV_FD = 1e-4
# second differences at h = 1e-4 are round-off dominated (~1e-4 relative);
# h = 3e-3 balances truncation and round-off for 4th-order stencils
FD_STEP = 3e-3


def _sym(rows):
    return ad.stack([ad.stack(row) for row in rows])


def metric_cylindrical(config: MonopoleConfig, chart: int):
    """Metric callable in (r, theta3, z, theta1) for the curvature engine."""
    config.check_chart(chart)

    def g(x):
        r, z = x[0], x[2]
        V = config.V(r, z)
        ft = config.ftilde(chart, r, z)
        q = z * z / V
        zero = 0.0 * V
        return _sym(
            [
                [V, zero, zero, zero],
                [zero, V * r * r + q * ft * ft, zero, q * ft],
                [zero, zero, V, zero],
                [zero, q * ft, zero, q],
            ]
        )

    return g


def metric_cartesian(config: MonopoleConfig, chart: int):
    """Metric callable in (x, y, z, theta1)."""
    config.check_chart(chart)

    def g(x):
        X, Y, z = x[0], x[1], x[2]
        r = ad.sqrt(X * X + Y * Y)
        V = config.V(r, z)
        B = config.ftilde_over_r2(chart, r, z)
        q = z * z / V
        # connection 1-form components: (-B y, B x, 0, 1)
        a = [-B * Y, B * X, 0.0 * V, 1.0 + 0.0 * V]
        rows = []
        for i in range(4):
            row = []
            for k in range(4):
                e = q * a[i] * a[k]
                if i == k and i < 3:
                    e = e + V
                row.append(e)
            rows.append(row)
        return _sym(rows)

    return g


@dataclass(frozen=True)
class MetricAtPoint:
    chart: int
    frame: str
    g: np.ndarray
    point: ChartPoint

    def __post_init__(self):
        if not np.allclose(self.g, self.g.T, rtol=0, atol=1e-12 * np.abs(self.g).max()):
            raise ValueError("metric is not symmetric")
        if np.linalg.eigvalsh(self.g).min() <= 0:
            raise ValueError("metric is not positive definite")


def metric_at(config: MonopoleConfig, p: ChartPoint, frame: str = CYLINDRICAL) -> MetricAtPoint:
    p.validate(config)
    if frame == CYLINDRICAL:
        if p.r <= 0:
            raise ChartDomainError("cylindrical frame is singular on the axis; use the Cartesian frame")
        x = [p.r, p.theta3, p.z, p.theta1]
        g = metric_cylindrical(config, p.chart)(x)
    elif frame == CARTESIAN:
        if p.r == 0:
            raise ChartDomainError("Cartesian frame needs r > 0 to evaluate ft / r^2")
        x = [p.r * np.cos(p.theta3), p.r * np.sin(p.theta3), p.z, p.theta1]
        g = metric_cartesian(config, p.chart)(x)
    else:
        raise ValueError(f"unknown frame {frame!r}")
    return MetricAtPoint(p.chart, frame, np.asarray(g, dtype=float), p)


def cylindrical_to_cartesian_jacobian(r, theta3) -> np.ndarray:
    """d(x, y, z, theta1) / d(r, theta3, z, theta1)."""
    c, s = np.cos(theta3), np.sin(theta3)
    return np.array([[c, -r * s, 0, 0], [s, r * c, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float)


def convert_frame(m: MetricAtPoint, frame: str) -> MetricAtPoint:
    """Express the metric in the other coordinate frame via the Jacobian."""
    if frame == m.frame:
        return m
    J = cylindrical_to_cartesian_jacobian(m.point.r, m.point.theta3)
    if m.frame == CYLINDRICAL:
        Ji = np.linalg.inv(J)
        g = Ji.T @ m.g @ Ji
    else:
        g = J.T @ m.g @ J
    return MetricAtPoint(m.chart, frame, g, m.point)


# -------------------------------------------------------- Joyce coordinates


def _check_quadrant(r, z):
    if np.any(np.asarray(r) <= 0) or np.any(np.asarray(z) <= 0):
        raise ChartDomainError("Joyce coordinates need r > 0 and z > 0")


def joyce_coordinates(r, z):
    _check_quadrant(r, z)
    return r * r - z * z, 2.0 * r * z


def conformal_factor(r, z):
    """dx1^2 + dx2^2 = factor (dr^2 + dz^2), factor = 4 (r^2 + z^2)."""
    x1, x2 = joyce_coordinates(r, z)
    return 4.0 * np.sqrt(x1 * x1 + x2 * x2)


def joyce_inverse(x1, x2):
    if np.any(np.asarray(x2) <= 0):
        raise ChartDomainError("inverse Joyce map needs x2 > 0")
    rho = np.sqrt(x1 * x1 + x2 * x2)
    return np.sqrt(0.5 * (x1 + rho)), np.sqrt(0.5 * (rho - x1))


# ---------------------------------------------------------------- curvature


@dataclass(frozen=True)
class CurvatureReport:
    scalar: float
    weyl_sd_norm: float
    weyl_asd_norm: float
    riemann_norm: float
    point: ChartPoint


def _points_array(points):
    return np.array([p.as_array() for p in points], dtype=float)


def curvature_at_points(config: MonopoleConfig, chart: int, pts, method="hyperdual", h=FD_STEP) -> Curvature:
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if np.any(pts[:, 0] < R_MIN):
        raise ChartDomainError(f"curvature samples need r >= {R_MIN}")
    return curvature(metric_cylindrical(config, chart), pts, method=method, h=h)


def scalar_curvature(config: MonopoleConfig, p: ChartPoint, method="hyperdual", h=FD_STEP) -> float:
    p.validate(config)
    return float(curvature_at_points(config, p.chart, p.as_array()[None], method, h).scalar[0])


def weyl_decomposition(config: MonopoleConfig, points, method="hyperdual", h=FD_STEP) -> list[CurvatureReport]:
    pts = list(points)
    out: list[CurvatureReport | None] = [None] * len(pts)
    for chart in sorted({p.chart for p in pts}):
        idx = [i for i, p in enumerate(pts) if p.chart == chart]
        cv = curvature_at_points(config, chart, _points_array([pts[i] for i in idx]), method, h)
        for k, i in enumerate(idx):
            out[i] = CurvatureReport(
                float(cv.scalar[k]),
                float(cv.weyl_plus_norm[k]),
                float(cv.weyl_minus_norm[k]),
                float(cv.riemann_frame_norm[k]),
                pts[i],
            )
    return out


@dataclass(frozen=True)
class SelfDualityVerdict:
    vanishing_side: str | None  # "W+" or "W-" relative to the chart orientation
    max_ratio: float
    consistent: bool


def self_duality(reports, tol: float = 1e-5) -> SelfDualityVerdict:
    """Check that one Weyl half vanishes and that it is the same half everywhere."""
    sides, ratios = set(), []
    for rep in reports:
        lo, hi = sorted((rep.weyl_sd_norm, rep.weyl_asd_norm))
        ratios.append(lo / hi if hi > 0 else 0.0)
        sides.add("W+" if rep.weyl_sd_norm < rep.weyl_asd_norm else "W-")
    worst = max(ratios) if ratios else 0.0
    side = sides.pop() if len(sides) == 1 else None
    return SelfDualityVerdict(side, worst, side is not None and worst < tol)


def sample_chart_points(config: MonopoleConfig, n: int, seed: int, chart: int | None = None, lo=0.2, hi=4.0):
    """Random interior chart points with r >= R_MIN, away from monopoles."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        r, z = rng.uniform(max(lo, R_MIN), hi), rng.uniform(lo, hi)
        if min(np.hypot(r, z - c) for c in config.heights) < 0.1:
            continue
        j = chart if chart is not None else int(rng.integers(1, config.n + 2))
        out.append(ChartPoint(j, r, rng.uniform(0, 2 * np.pi), z, rng.uniform(0, 2 * np.pi)))
    return out
