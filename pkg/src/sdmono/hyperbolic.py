"""Upper half-space hyperbolic 3-geometry.

Points are ``w = x + y i + z j`` with ``z > 0``.  An isometry is stored as a
normalised complex quadruple ``(a, b, c, d)`` with ``ad - bc = 1`` and an
orientation flag; it acts by the quaternionic Moebius formula

    w  ->  (a w + b)(c w + d)^{-1}                (preserving)
    w  ->  (a (-w~) + b)(c (-w~) + d)^{-1}        (reversing)

where ``w~`` is the quaternion conjugate.  The quaternion arithmetic is
written on 4-tuples of components so that it accepts floats, numpy arrays
and autodiff jets alike.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import autodiff as ad

TAU_GEO = 1e-9


# ---------------------------------------------------------------- quaternions


def qmul(p, q):
    a0, a1, a2, a3 = p
    b0, b1, b2, b3 = q
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def qconj(q):
    return (q[0], -q[1], -q[2], -q[3])


def qinv(q):
    n = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]
    c = qconj(q)
    return tuple(ci / n for ci in c)


def qadd(p, q):
    return tuple(pi + qi for pi, qi in zip(p, q))


def _cq(a: complex):
    """Complex scalar as a quaternion."""
    return (a.real, a.imag, 0.0, 0.0)


# ------------------------------------------------------------------- points


@dataclass(frozen=True)
class HyperbolicPoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not self.z > 0:
            raise ValueError(f"point must have z > 0, got z={self.z}")

    @property
    def w(self) -> complex:
        """Boundary projection x + iy."""
        return complex(self.x, self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def hyperbolic_distance(p: HyperbolicPoint, q: HyperbolicPoint) -> float:
    d2 = (p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.z - q.z) ** 2
    return float(np.arccosh(1.0 + d2 / (2.0 * p.z * q.z)))


# ---------------------------------------------------------------- isometries


class Orientation(enum.Enum):
    PRESERVING = 1
    REVERSING = -1


@dataclass(frozen=True)
class HyperbolicIsometry:
    a: complex
    b: complex
    c: complex
    d: complex
    orientation: Orientation = Orientation.PRESERVING

    def __post_init__(self):
        det = complex(self.a * self.d - self.b * self.c)
        if abs(det) < 1e-300:
            raise ValueError("degenerate isometry: ad - bc = 0")
        s = cmath.sqrt(det)
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)) / s)

    @property
    def reversing(self) -> bool:
        return self.orientation is Orientation.REVERSING

    @property
    def sign(self) -> int:
        return self.orientation.value

    def apply_xyz(self, x, y, z):
        """Vectorised action on coordinate arrays (or jets)."""
        if self.reversing:
            x = -x
        w = (x, y, z, 0.0 * z)
        num = qadd(qmul(_cq(self.a), w), _cq(self.b))
        den = qadd(qmul(_cq(self.c), w), _cq(self.d))
        out = qmul(num, qinv(den))
        return out[0], out[1], out[2]

    def __call__(self, p: HyperbolicPoint) -> HyperbolicPoint:
        return apply_isometry(self, p)

    def _jconj(self) -> "HyperbolicIsometry":
        # J M J with J(u) = -conj(u); keeps orientation
        return HyperbolicIsometry(
            self.a.conjugate(), -self.b.conjugate(), -self.c.conjugate(), self.d.conjugate(), self.orientation
        )

    def compose(self, other: "HyperbolicIsometry") -> "HyperbolicIsometry":
        """Return ``self o other``."""
        m2 = other._jconj() if self.reversing else other
        a = self.a * m2.a + self.b * m2.c
        b = self.a * m2.b + self.b * m2.d
        c = self.c * m2.a + self.d * m2.c
        d = self.c * m2.b + self.d * m2.d
        sign = self.sign * other.sign
        return HyperbolicIsometry(a, b, c, d, Orientation(sign))

    def inverse(self) -> "HyperbolicIsometry":
        inv = HyperbolicIsometry(self.d, -self.b, -self.c, self.a, Orientation.PRESERVING)
        if self.reversing:
            inv = inv._jconj()
        return HyperbolicIsometry(inv.a, inv.b, inv.c, inv.d, self.orientation)


IDENTITY = HyperbolicIsometry(1, 0, 0, 1)


def apply_isometry(iso: HyperbolicIsometry, p: HyperbolicPoint) -> HyperbolicPoint:
    x, y, z = iso.apply_xyz(p.x, p.y, p.z)
    return HyperbolicPoint(float(x), float(y), float(z))


def make_rotation_about_z(theta: float) -> HyperbolicIsometry:
    h = cmath.exp(0.5j * theta)
    return HyperbolicIsometry(h, 0, 0, 1 / h)


def make_translation(t: complex) -> HyperbolicIsometry:
    """Horizontal Euclidean translation by the boundary vector ``t``."""
    return HyperbolicIsometry(1, t, 0, 1)


def make_reflection_hemisphere(center, radius: float) -> HyperbolicIsometry:
    """Inversion in the hemisphere of the given radius over a boundary point."""
    if not radius > 0:
        raise ValueError("hemisphere radius must be positive")
    c0 = complex(*center) if not isinstance(center, complex) else center
    # centred at 0: w -> R^2 w / |w|^2 is (0, R, -1/R, 0) after w -> -w~
    inv0 = HyperbolicIsometry(0, radius, -1.0 / radius, 0, Orientation.REVERSING)
    return make_translation(c0).compose(inv0).compose(make_translation(-c0))


def make_reflection_vertical_plane(normal, offset: float) -> HyperbolicIsometry:
    """Reflection in the vertical plane {n . (x, y) = offset}, n a unit vector."""
    n = np.asarray(normal, dtype=float)
    norm = float(np.hypot(n[0], n[1]))
    if norm == 0:
        raise ValueError("normal must be nonzero")
    e = complex(n[0], n[1]) / norm
    # u -> -conj(u) e^2 + 2 d e
    return HyperbolicIsometry(e, 2.0 * offset, 0, 1 / e, Orientation.REVERSING)


# ----------------------------------------------------------------- geodesics


@dataclass(frozen=True)
class Geodesic:
    """Either a vertical line over ``foot`` or a semicircle with two endpoints."""

    foot: complex | None = None
    endpoints: tuple[complex, complex] | None = None

    def __post_init__(self):
        if (self.foot is None) == (self.endpoints is None):
            raise ValueError("geodesic needs exactly one of foot / endpoints")
        if self.endpoints is not None and abs(self.endpoints[0] - self.endpoints[1]) == 0:
            raise ValueError("semicircle endpoints must differ")

    @property
    def vertical(self) -> bool:
        return self.foot is not None

    def straighten(self) -> HyperbolicIsometry:
        """An isometry carrying this geodesic to the z-axis."""
        if self.vertical:
            return make_translation(-self.foot)
        e1, e2 = self.endpoints
        return HyperbolicIsometry(1, -e1, 1, -e2)

    def distance(self, p: HyperbolicPoint) -> float:
        q = apply_isometry(self.straighten(), p)
        return float(np.arcsinh(math.hypot(q.x, q.y) / q.z))

    def arclength(self, p: HyperbolicPoint) -> float:
        """Signed arclength coordinate of the projection of ``p``."""
        q = apply_isometry(self.straighten(), p)
        return 0.5 * math.log(q.x**2 + q.y**2 + q.z**2)

    def contains(self, p: HyperbolicPoint, tol: float = TAU_GEO) -> bool:
        return self.distance(p) < tol


def _check_distinct(points, tol):
    if len(points) < 2:
        raise ValueError("need at least two points")
    for i in range(len(points)):
        for j in range(i):
            if hyperbolic_distance(points[i], points[j]) < tol:
                raise ValueError(f"duplicate points at indices {j}, {i}")


def common_geodesic(points, tol: float = TAU_GEO) -> Geodesic | None:
    pts = list(points)
    _check_distinct(pts, tol)
    p0 = pts[0]
    far = max(pts[1:], key=lambda p: abs(p.w - p0.w))
    if abs(far.w - p0.w) <= tol * max(1.0, p0.z):
        geo = Geodesic(foot=p0.w)
    else:
        e = (far.w - p0.w) / abs(far.w - p0.w)
        s0, s1 = 0.0, ((far.w - p0.w) / e).real
        m = (s1**2 + far.z**2 - s0**2 - p0.z**2) / (2 * (s1 - s0))
        rad = math.hypot(s0 - m, p0.z)
        geo = Geodesic(endpoints=(p0.w + (m - rad) * e, p0.w + (m + rad) * e))
    if all(geo.contains(p, tol) for p in pts):
        return geo
    return None


class StabilizerClass(enum.Enum):
    COLLINEAR_ASYMMETRIC = "CollinearAsymmetric"
    COLLINEAR_SYMMETRIC = "CollinearSymmetric"
    NON_COLLINEAR = "NonCollinear"


def stabilizer_class(points, tol: float = TAU_GEO) -> StabilizerClass:
    geo = common_geodesic(points, tol)
    if geo is None:
        return StabilizerClass.NON_COLLINEAR
    t = np.sort([geo.arclength(p) for p in points])
    if np.all(np.abs(t + t[::-1] - (t[0] + t[-1])) < tol):
        return StabilizerClass.COLLINEAR_SYMMETRIC
    return StabilizerClass.COLLINEAR_ASYMMETRIC


def same_isometry(f: HyperbolicIsometry, g: HyperbolicIsometry, tol: float = 1e-10) -> bool:
    """Equality as maps (the quadruple is defined up to an overall sign)."""
    if f.orientation is not g.orientation:
        return False
    u = np.array([f.a, f.b, f.c, f.d])
    v = np.array([g.a, g.b, g.c, g.d])
    return min(np.abs(u - v).max(), np.abs(u + v).max()) < tol
