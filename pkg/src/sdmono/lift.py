"""Lifts of hyperbolic isometries to the circle bundle, and conformality.

Maps are written in a reference chart ``ref`` with coordinates
``(r, theta3, z, theta1)`` and converted to other charts with the transition
functions.  A :class:`BundleMap` covers an isometry ``phi`` of the base and
acts on the fibre coordinate by ``theta1 -> eps*theta1 + delta(r, theta3, z)``,
``eps = -1`` iff ``phi`` reverses orientation.  Pulling back the real
connection form ``w = ft dtheta3 + dtheta1`` to ``eps * w`` requires

    d delta = eps * wt - phi^* wt,      wt = ft dtheta3,

which is integrated numerically from an anchor point.

Angle conventions: a fibre rotation "by e^{i psi}" is ``theta1 -> theta1 - psi``
and the base rotation by ``theta`` is ``theta3 -> theta3 + theta``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import autodiff as ad
from .hyperbolic import (
    IDENTITY,
    TAU_GEO,
    HyperbolicIsometry,
    HyperbolicPoint,
    make_reflection_hemisphere,
    make_reflection_vertical_plane,
    make_rotation_about_z,
    StabilizerClass,
    stabilizer_class,
)
from .metric import R_MIN, metric_cylindrical
from .monopole import ChartPoint, MonopoleConfig, transition

log = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
MAP_TOL = 1e-8


class LiftError(ValueError):
    """The requested lift does not exist or could not be certified."""


def wrap(a):
    """Reduce angles to (-pi, pi]."""
    return np.pi - np.mod(np.pi - a, TWO_PI)


# ------------------------------------------------------------- chart maps


class ChartMap:
    """A map of the circle bundle given by a formula in chart ``ref``."""

    def __init__(self, config: MonopoleConfig, fn: Callable, ref: int = 2, name: str = ""):
        config.check_chart(ref)
        self.config = config
        self.fn = fn
        self.ref = ref
        self.name = name

    def jet(self, x, chart_in: int | None = None, chart_out: int | None = None):
        """Apply to a list of 4 coordinates (arrays or jets)."""
        ci = self.ref if chart_in is None else chart_in
        co = ci if chart_out is None else chart_out
        r, t3, z, t1 = x
        t1 = t1 - transition(ci, self.ref, t3)
        r2, s3, z2, s1 = self.fn(r, t3, z, t1)
        s1 = s1 - transition(self.ref, co, s3)
        return [r2, s3, z2, s1]

    def __call__(self, pts, chart_in: int | None = None, chart_out: int | None = None) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        out = self.jet([pts[..., k] for k in range(4)], chart_in, chart_out)
        return np.stack([np.broadcast_to(np.asarray(o, dtype=float), pts.shape[:-1]) for o in out], axis=-1)

    def compose(self, other: "ChartMap") -> "ChartMap":
        """``self o other`` (both converted to ``other.ref``)."""
        def fn(r, t3, z, t1):
            y = other.jet([r, t3, z, t1], other.ref, self.ref)
            return tuple(self.jet(y, self.ref, other.ref))

        return ChartMap(self.config, fn, other.ref, f"{self.name}*{other.name}")

    def __matmul__(self, other: "ChartMap") -> "ChartMap":
        return self.compose(other)


def identity_map(config: MonopoleConfig, ref: int = 2) -> ChartMap:
    return ChartMap(config, lambda r, t3, z, t1: (r, t3, z, t1), ref, "Id")


def torus_action(config: MonopoleConfig, psi1: float, psi3: float, ref: int = 2) -> ChartMap:
    """K1 x K3 element (e^{i psi1}, e^{i psi3}): (theta3, theta1) -> (theta3 - psi3, theta1 - psi1)."""
    return ChartMap(config, lambda r, t3, z, t1: (r, t3 - psi3, z, t1 - psi1), ref, "T")


def fibre_rotation(config: MonopoleConfig, psi: float, ref: int = 2) -> ChartMap:
    return torus_action(config, psi, 0.0, ref)


def maps_equal(f: ChartMap, g: ChartMap, pts, chart: int | None = None, tol: float = MAP_TOL) -> bool:
    return map_distance(f, g, pts, chart) < tol


def map_distance(f: ChartMap, g: ChartMap, pts, chart: int | None = None) -> float:
    return image_distance(f(pts, chart, chart), g(pts, chart, chart))


def image_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max coordinate difference of two image arrays, angles compared mod 2 pi."""
    d = np.abs(a - b)
    d[..., 1] = np.abs(wrap(a[..., 1] - b[..., 1]))
    d[..., 3] = np.abs(wrap(a[..., 3] - b[..., 3]))
    return float(d.max())


def map_group(maps, identity: ChartMap, pts, chart: int | None = None, tol: float = MAP_TOL):
    """Close ``maps`` under composition; equality is pointwise on ``pts``."""
    from .groups import closure_table

    return closure_table(
        list(maps),
        lambda a, b: a @ b,
        lambda sa, sb: image_distance(sa, sb) < tol,
        identity,
        signature=lambda m: m(pts, chart, chart),
    )


# ---------------------------------------------------------- base actions


def base_cylindrical(iso: HyperbolicIsometry, r, t3, z):
    x, y = r * ad.cos(t3), r * ad.sin(t3)
    X, Y, Z = iso.apply_xyz(x, y, z)
    return ad.sqrt(X * X + Y * Y), ad.atan2(Y, X), Z


def preserves_monopoles(iso: HyperbolicIsometry, config: MonopoleConfig, tol: float = TAU_GEO) -> bool:
    from .hyperbolic import hyperbolic_distance

    imgs = [iso(p) for p in config.points]
    return all(min(hyperbolic_distance(q, p) for p in config.points) < tol for q in imgs)


# ------------------------------------------------------ gauge potential


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


class GaugePotential:
    """delta(b) = delta_a + integral_a^b (eps wt - phi^* wt) along straight paths."""

    def __init__(self, config, iso, ref, anchor_base, delta_anchor, pieces: int = 8):
        self.config, self.iso, self.ref = config, iso, ref
        self.eps = iso.sign
        self.anchor = np.asarray(anchor_base, dtype=float)
        self.delta_anchor = float(delta_anchor)
        self.pieces = pieces
        self._cache: dict = {}

    def form(self, b: np.ndarray) -> np.ndarray:
        """Components (dr, dtheta3, dz) of eps wt - phi^* wt at base points (..., 3)."""
        r, t3, z = ad.seed_dual(b)
        ft = self.config.ftilde(self.ref, b[..., 0], b[..., 2])
        r2, s3, z2 = base_cylindrical(self.iso, r, t3, z)
        ft_img = self.config.ftilde(self.ref, ad.value(r2), ad.value(z2))
        out = -ft_img[..., None] * s3.eps
        out[..., 1] += self.eps * ft
        return out

    def integrate(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        step = b - a
        edges = np.linspace(0.0, 1.0, self.pieces + 1)
        t = np.concatenate([0.5 * (lo + hi) + 0.5 * (hi - lo) * _GL_X for lo, hi in zip(edges[:-1], edges[1:])])
        w = np.concatenate([0.5 * (hi - lo) * _GL_W for lo, hi in zip(edges[:-1], edges[1:])])
        nodes = a[..., None, :] + t[:, None] * step[..., None, :]
        vals = np.einsum("...mk,...k->...m", self.form(nodes), step)
        return vals @ w

    def value(self, b: np.ndarray) -> np.ndarray:
        key = (b.shape, b.tobytes())
        hit = self._cache.get(key)
        if hit is None:
            hit = self.delta_anchor + self.integrate(self.anchor, b)
            if len(self._cache) > 64:
                self._cache.clear()
            self._cache[key] = hit
        return hit

    def detour(self, b: np.ndarray) -> np.ndarray:
        """Same integral along a two-segment path through a displaced midpoint."""
        mid = 0.5 * (self.anchor + b)
        mid = mid + np.array([0.37, 0.61, 0.29]) * np.maximum(0.25, 0.2 * np.abs(b - self.anchor).max(axis=-1))[..., None]
        return self.delta_anchor + self.integrate(self.anchor, mid) + self.integrate(mid, b)

    def __call__(self, r, t3, z):
        b = np.stack(np.broadcast_arrays(*(np.asarray(ad.value(u), float) for u in (r, t3, z))), axis=-1)
        val = self.value(b)
        if not any(isinstance(u, ad.Dual) for u in (r, t3, z)):
            if any(isinstance(u, ad.HyperDual) for u in (r, t3, z)):
                raise TypeError("gauge potentials support first derivatives only")
            return val
        fm = self.form(b)
        out = 0.0
        for k, u in enumerate((r, t3, z)):
            if isinstance(u, ad.Dual):
                out = out + u * fm[..., k] - ad.value(u) * fm[..., k]
        return out + val


class BundleMap(ChartMap):
    """Lift of a base isometry: (b, theta1) -> (phi(b), eps theta1 + delta(b))."""

    def __init__(self, config, base: HyperbolicIsometry, delta, ref: int = 2, name: str = "", anchor=None):
        self.base = base
        self.sign = base.sign
        self.delta = delta
        self.anchor = anchor

        def fn(r, t3, z, t1):
            r2, s3, z2 = base_cylindrical(base, r, t3, z)
            d = delta(r, t3, z) if callable(delta) else delta
            return r2, s3, z2, self.sign * t1 + d

        super().__init__(config, fn, ref, name)


def lift_isometry(
    config: MonopoleConfig,
    iso: HyperbolicIsometry,
    anchor: ChartPoint,
    fixed: bool = True,
    name: str = "",
    probes: int = 8,
) -> BundleMap:
    """Lift ``iso`` by integrating the gauge potential from ``anchor``.

    With ``fixed=True`` the anchor's base point must be fixed by ``iso`` and
    the lift fixes the anchor; otherwise it sends the anchor fibre angle
    ``t`` to ``eps * t``.
    """
    if not preserves_monopoles(iso, config):
        raise LiftError("isometry does not preserve the monopole set")
    anchor.validate(config)
    ref = anchor.chart
    a = np.array([anchor.r, anchor.theta3, anchor.z])
    if anchor.r < R_MIN:
        raise LiftError("anchor must lie off the axis")
    img = np.array([float(u) for u in base_cylindrical(iso, anchor.r, anchor.theta3, anchor.z)])
    if fixed:
        if abs(img[0] - a[0]) + abs(wrap(img[1] - a[1])) + abs(img[2] - a[2]) > 1e-9:
            raise LiftError("anchor base point is not fixed by the isometry")
        da = (1 - iso.sign) * anchor.theta1
    else:
        da = 0.0
    pot = GaugePotential(config, iso, ref, a, da)
    rng = np.random.default_rng(12345)
    test = np.column_stack(
        [rng.uniform(0.3, 3.0, probes), rng.uniform(-np.pi, np.pi, probes), rng.uniform(0.3, 3.0, probes)]
    )
    gap = np.abs(wrap(pot.value(test) - pot.detour(test))).max()
    if gap > MAP_TOL:
        raise LiftError(f"gauge potential is path dependent (gap {gap:.2e})")
    return BundleMap(config, iso, pot, ref, name, anchor)


def lift_uniqueness_gap(m1: BundleMap, m2: BundleMap, pts) -> float:
    """Spread of delta1 - delta2 (mod 2 pi) over points; zero iff they differ by a constant."""
    pts = np.asarray(pts, float)
    d = wrap(m1(pts)[..., 3] - m2(pts)[..., 3])
    return float(np.abs(wrap(d - d[0])).max())


# ----------------------------------------------------- rotation family


def rotation_multiplier(config: MonopoleConfig, k: int, chart: int, ref: int = 2) -> float:
    """m_j with the k-lift rotating fibres over I_j by e^{i m_j theta}."""
    return k + config.chart_constant(chart) - config.chart_constant(ref)


def lift_rotation(config: MonopoleConfig, k: int, theta: float, ref: int = 2) -> BundleMap:
    """k-lift of the rotation by ``theta`` about the z-axis."""
    return BundleMap(config, make_rotation_about_z(theta), -k * theta, ref, f"R{k}({theta:.3g})")


def lift_rotation_family(config: MonopoleConfig, k: int, ref: int = 2) -> Callable[[float], BundleMap]:
    config.check_chart(ref)
    return lambda theta: lift_rotation(config, k, theta, ref)


def fixed_axis_intervals(config: MonopoleConfig, k: int, ref: int = 2) -> list[int]:
    """Indices j whose axis fibres are fixed pointwise by the whole k-lifted circle."""
    return [j for j in config.charts if rotation_multiplier(config, k, j, ref) == 0]


# ------------------------------------------------------ generators


def reflection_generators(config: MonopoleConfig, ref: int = 2) -> dict[str, ChartMap]:
    """Phi1, Phi2, Phi3 (Phi2 only for symmetric configurations).

    Phi3 lifts the reflection in the plane y = 0 and fixes a fibre point over
    it; Phi1 lifts phi2 o phi3 (rotation by pi about the geodesic orthogonal
    to the axis) fixing a whole fibre over that geodesic; Phi2 = Phi1 o Phi3.
    """
    if not config.toric:
        raise LiftError("generators need a collinear (toric) configuration")
    plane = make_reflection_vertical_plane((0.0, 1.0), 0.0)
    c_mid = config.heights[len(config.heights) // 2]
    phi3 = lift_isometry(config, plane, ChartPoint(ref, 1.0, 0.0, c_mid + 0.37, 0.0), name="Phi3")
    out = {"Phi3": phi3}
    if config.n >= 2 and stabilizer_class(config.points) is StabilizerClass.COLLINEAR_SYMMETRIC:
        R = math.sqrt(config.heights[0] * config.heights[-1])
        hemi = make_reflection_hemisphere((0.0, 0.0), R)
        rot = hemi.compose(plane)
        ang = 0.7
        anchor = ChartPoint(ref, R * math.cos(ang), 0.0, R * math.sin(ang), 0.0)
        phi1 = lift_isometry(config, rot, anchor, name="Phi1")
        out["Phi1"] = phi1
        phi2 = phi1 @ phi3
        phi2.name = "Phi2"
        out["Phi2"] = phi2
    return out


def phi2_generator(config: MonopoleConfig, ref: int = 2) -> ChartMap:
    gens = reflection_generators(config, ref)
    if "Phi2" not in gens:
        raise LiftError("Phi2 requires a collinear symmetric configuration")
    return gens["Phi2"]


def involution_defect(m: BundleMap, b: ChartPoint) -> float:
    """The constant g with m o m = R(g), measured on one fibre, in (-pi, pi]."""
    x = b.as_array()[None]
    y = m(m(x))
    return float(wrap(x[0, 3] - y[0, 3]))


def correct_involution(m: BundleMap, b: ChartPoint) -> BundleMap:
    """Compose with the fibre rotation by sqrt(g^{-1}) so the lift squares to the identity.

    For orientation-reversing lifts the constant cancels in the square, so the
    correction is the identity.
    """
    g = involution_defect(m, b)
    if m.sign < 0:
        return m
    pot = m.delta
    new = BundleMap(m.config, m.base, lambda r, t3, z: pot(r, t3, z) - 0.5 * g, m.ref, m.name, m.anchor)
    return new


# -------------------------------------------------- fibre fixed points


@dataclass(frozen=True)
class FibreFixedPoints:
    count: float  # math.inf when the whole fibre is fixed
    angles: tuple[float, ...]


def fixed_points_in_fiber(m: BundleMap, base_fixed: HyperbolicPoint, chart: int | None = None) -> FibreFixedPoints:
    img = m.base(base_fixed)
    if abs(img.x - base_fixed.x) + abs(img.y - base_fixed.y) + abs(img.z - base_fixed.z) > 1e-9:
        raise LiftError("base point is not fixed by the isometry")
    r = math.hypot(base_fixed.x, base_fixed.y)
    t3 = math.atan2(base_fixed.y, base_fixed.x)
    ch = m.ref if chart is None else chart
    x = np.array([[r, t3, base_fixed.z, 0.0]])
    delta = float(m(x, ch, ch)[0, 3])
    if m.sign < 0:
        a = float(np.mod(delta / 2, TWO_PI))
        return FibreFixedPoints(2, tuple(sorted((a, float(np.mod(a + np.pi, TWO_PI))))))
    if abs(wrap(delta)) < MAP_TOL:
        return FibreFixedPoints(math.inf, ())
    return FibreFixedPoints(0, ())


# ---------------------------------------------------- extra involution


def varphi(c1: float, c2: float, r, z):
    """phi(w) = i c2 sqrt((wbar^2 + c1^2)/(wbar^2 + c2^2)) in real arithmetic."""
    x1 = r * r - z * z
    x2 = 2.0 * r * z
    A = x1 + c1 * c1
    B = x1 + c2 * c2
    D = B * B + x2 * x2
    u = -c2 * c2 * (A * B + x2 * x2) / D
    v = c2 * c2 * (c2 * c2 - c1 * c1) * x2 / D
    m = ad.sqrt(u * u + v * v)
    return ad.sqrt(0.5 * (m + u)), ad.sqrt(0.5 * (m - u))


def mobius_L(c1: float, c2: float, zeta: complex) -> complex:
    zb = np.conj(zeta)
    return -c2 * c2 * (zb + c1 * c1) / (zb + c2 * c2)


def extra_involution(config: MonopoleConfig, vartheta: float = 0.0) -> ChartMap:
    """Lambda~(vartheta): ((r, z), theta3, theta1) -> (phi(r, z), theta1 - vartheta, theta3 + vartheta) in U_2."""
    if not config.toric or config.n != 2:
        raise LiftError("the extra involution needs n = 2 monopoles on a geodesic")
    c1, c2 = config.heights

    def fn(r, t3, z, t1):
        p1, p2 = varphi(c1, c2, r, z)
        return p1, t1 - vartheta, p2, t3 + vartheta

    return ChartMap(config, fn, 2, f"Lambda({vartheta:.3g})")


def varphi_axis(c1: float, c2: float, z):
    """phi on the axis interval I_1: (0, c2 sqrt((c1^2 - z^2)/(c2^2 - z^2)))."""
    return 0.0 * z, c2 * np.sqrt((c1 * c1 - z * z) / (c2 * c2 - z * z))


@dataclass(frozen=True)
class FixedCircle:
    center: complex
    radius: float
    fit_residual: float
    axis_hits: tuple[float, ...]  # z-values where the fixed set meets r = 0
    hits_I1: int
    hits_I3: int


def fixed_circle_of_varphi(c1: float, c2: float, n_lines: int = 41) -> FixedCircle:
    """Locate the fixed geodesic of L in the zeta half-plane and fit a circle.

    On a vertical line Im L(zeta) - Im zeta changes sign exactly where the
    line crosses the fixed circle, so each crossing is bracketed for brentq.
    """
    if not 0 < c1 < c2:
        raise ValueError("need 0 < c1 < c2")
    scale = c2 * c2
    F = lambda a, y: float(np.imag(mobius_L(c1, c2, complex(a, y))) - y)  # noqa: E731
    pts = []
    for a in np.linspace(-4 * scale, 4 * scale, 8 * n_lines + 1):
        lo, hi = 1e-9 * scale, 1e3 * scale
        if F(a, lo) > 0 > F(a, hi):
            y = brentq(lambda t: F(a, t), lo, hi, xtol=1e-15 * scale, rtol=1e-15)
            pts.append((a, y))
    P = np.array(pts)
    if len(P) < 3:
        raise LiftError("fixed set of L not found")
    # Kasa fit: x^2 + y^2 + D x + E y + F0 = 0
    M = np.column_stack([P[:, 0], P[:, 1], np.ones(len(P))])
    rhs = -(P[:, 0] ** 2 + P[:, 1] ** 2)
    (D, E, F0), *_ = np.linalg.lstsq(M, rhs, rcond=None)
    center = complex(-D / 2, -E / 2)
    radius = math.sqrt(center.real**2 + center.imag**2 - F0)
    resid = float(np.abs(np.hypot(P[:, 0] - center.real, P[:, 1] - center.imag) - radius).max())
    ends = [center.real - radius, center.real + radius]
    hits = tuple(sorted(math.sqrt(-e) for e in ends if e < 0))
    return FixedCircle(
        center,
        radius,
        resid,
        hits,
        sum(1 for h in hits if 0 < h < c1),
        sum(1 for h in hits if h > c2),
    )


# --------------------------------------------------------- conformality


@dataclass(frozen=True)
class ConformalityReport:
    max_deviation: float
    factors: np.ndarray
    expected: np.ndarray | None
    max_factor_error: float | None
    n_points: int
    resampled: int = 0


def pullback_metric(m: ChartMap, pts: np.ndarray, chart: int):
    """Phi^* g and g at chart points, using Dual Jacobians of the full 4D map."""
    x = ad.seed_dual(pts)
    y = m.jet(x, chart, chart)
    vals = np.stack([np.broadcast_to(ad.value(u), pts.shape[:-1]) for u in y], axis=-1)
    J = np.stack([u.eps if isinstance(u, ad.Dual) else np.zeros(pts.shape) for u in y], axis=-2)
    gfn = metric_cylindrical(m.config, chart)
    g_img = np.asarray(gfn([vals[..., k] for k in range(4)]))
    g_src = np.asarray(gfn([pts[..., k] for k in range(4)]))
    return np.einsum("...ia,...ij,...jb->...ab", J, g_img, J), g_src, vals


def verify_conformal(
    m: ChartMap,
    config: MonopoleConfig,
    samples,
    tol: float | None = None,
    chart: int | None = None,
    expected: str | None = "auto",
    rng_seed: int = 0,
) -> ConformalityReport:
    """Proportionality deviation |Phi^*g - lam g| / |g| with lam = tr(g^{-1} Phi^*g)/4.

    Samples whose image lands within R_MIN/10 of the axis are replaced.
    """
    chart = m.ref if chart is None else chart
    pts = np.array([s.as_array() if isinstance(s, ChartPoint) else s for s in samples], dtype=float)
    rng = np.random.default_rng(rng_seed)
    resampled = 0
    for _ in range(50):
        bad = m(pts, chart, chart)[:, 0] < R_MIN / 10
        if not bad.any():
            break
        resampled += int(bad.sum())
        log.info("resampling %d points whose image is near the axis", bad.sum())
        k = int(bad.sum())
        pts[bad] = np.column_stack(
            [rng.uniform(0.2, 4, k), rng.uniform(0, TWO_PI, k), rng.uniform(0.2, 4, k), rng.uniform(0, TWO_PI, k)]
        )
    P, g, img = pullback_metric(m, pts, chart)
    lam = np.einsum("...ij,...ji->...", np.linalg.inv(g), P) / 4.0
    dev = np.linalg.norm(P - lam[..., None, None] * g, axis=(-2, -1)) / np.linalg.norm(g, axis=(-2, -1))
    exp = None
    if expected == "auto" and isinstance(m, BundleMap):
        exp = (img[:, 2] / pts[:, 2]) ** 2
    ferr = None if exp is None else float(np.abs(lam - exp).max() / max(1.0, np.abs(exp).max()))
    rep = ConformalityReport(float(dev.max()), lam, exp, ferr, len(pts), resampled)
    if tol is not None and (rep.max_deviation > tol or (ferr is not None and ferr > tol)):
        log.warning("conformality above tolerance: deviation %.2e", rep.max_deviation)
    return rep


def random_chart_points(n: int, seed: int, lo: float = 0.2, hi: float = 4.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.column_stack(
        [rng.uniform(lo, hi, n), rng.uniform(0, TWO_PI, n), rng.uniform(lo, hi, n), rng.uniform(0, TWO_PI, n)]
    )


__all__ = [name for name in dir() if not name.startswith("_")] + ["IDENTITY"]
