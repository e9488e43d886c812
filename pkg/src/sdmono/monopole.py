"""Monopole potential, explicit connection, chart atlas and transitions.

For monopoles on the z-axis at heights ``c_1 < ... < c_n`` the base is
described in cylindrical coordinates ``(r, theta3, z)``.  The z-axis is cut
at the monopole heights into the open intervals ``I_1 = (0, c_1)``, ...,
``I_{n+1} = (c_n, inf)`` and chart ``U_j`` is the off-axis region together
with ``I_j``.  In chart ``j`` the (real) connection form is

    (k_j + f) dtheta3 + dtheta1,     f = sum_i f_{c_i},

with ``k_j = -f(0, z in I_j)`` so that the form extends over ``I_j``.
All scalar functions accept floats, arrays or autodiff jets for ``r, z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from . import autodiff as ad
from .hyperbolic import TAU_GEO, HyperbolicPoint, hyperbolic_distance


class SingularityError(ValueError):
    """Evaluation at a monopole point."""


class ChartDomainError(ValueError):
    """Point outside the requested chart."""


def _check_regular(c, r, z):
    rv, zv = np.asarray(ad.value(r)), np.asarray(ad.value(z))
    if np.any((rv == 0) & (zv == c)):
        raise SingularityError(f"evaluation at the monopole point (0, {c})")


def _discriminant(c, r, z):
    """(r^2 + z^2 + c^2)^2 - 4 c^2 z^2, factored to avoid cancellation near the axis."""
    return (r * r + (z - c) * (z - c)) * (r * r + (z + c) * (z + c))


def green(c, r, z):
    """Green's function of a monopole at height ``c`` on the z-axis."""
    _check_regular(c, r, z)
    s = r * r + z * z + c * c
    return -0.5 + 0.5 * s / ad.sqrt(_discriminant(c, r, z))


def green_from_distance(d):
    """The same Green's function as a function of hyperbolic distance."""
    return 0.5 * (1.0 / np.tanh(d) - 1.0)


def connection_potential_fc(c, r, z):
    _check_regular(c, r, z)
    return ((c - z) * (c + z) - r * r) / (2.0 * ad.sqrt(_discriminant(c, r, z)))


@dataclass(frozen=True)
class MonopoleConfig:
    points: tuple[HyperbolicPoint, ...]
    toric: bool = field(init=False)
    heights: tuple[float, ...] | None = field(init=False)

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise ValueError("need at least one monopole")
        for i in range(len(pts)):
            for j in range(i):
                if hyperbolic_distance(pts[i], pts[j]) < TAU_GEO:
                    raise ValueError("monopole points must be distinct")
        object.__setattr__(self, "points", pts)
        toric = all(p.x == 0 and p.y == 0 for p in pts)
        object.__setattr__(self, "toric", toric)
        object.__setattr__(self, "heights", tuple(sorted(p.z for p in pts)) if toric else None)

    @classmethod
    def from_heights(cls, heights) -> "MonopoleConfig":
        hs = [float(h) for h in heights]
        if any(b <= a for a, b in zip(hs, hs[1:])):
            raise ValueError("heights must be strictly increasing")
        return cls(tuple(HyperbolicPoint(0.0, 0.0, h) for h in hs))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def charts(self) -> range:
        return range(1, self.n + 2)

    def _require_toric(self):
        if not self.toric:
            raise ValueError("operation requires a toric (z-axis) configuration")

    # -- scalar fields on (r, z)

    def V(self, r, z):
        self._require_toric()
        out = 1.0
        for c in self.heights:
            out = green(c, r, z) + out
        return out

    def f(self, r, z):
        self._require_toric()
        out = 0.0
        for c in self.heights:
            out = connection_potential_fc(c, r, z) + out
        return out

    # -- charts

    def interval(self, j: int) -> tuple[float, float]:
        self.check_chart(j)
        cuts = (0.0,) + self.heights + (np.inf,)
        return cuts[j - 1], cuts[j]

    def check_chart(self, j: int):
        self._require_toric()
        if j not in self.charts:
            raise ChartDomainError(f"chart index {j} outside 1..{self.n + 1}")

    def chart_constant(self, j: int) -> float:
        """k_j = -f(0, z) for z in I_j, i.e. -(n - 2j + 2)/2."""
        self.check_chart(j)
        return -0.5 * (self.n - 2 * j + 2)

    def chart_of_axis_point(self, z: float) -> int:
        self._require_toric()
        return 1 + int(np.searchsorted(self.heights, z))

    def in_chart(self, j: int, r, z) -> np.ndarray:
        lo, hi = self.interval(j)
        r, z = np.asarray(ad.value(r)), np.asarray(ad.value(z))
        return (r > 0) | ((z > lo) & (z < hi))

    def ftilde_over_r2(self, j: int, r, z):
        """(k_j + f) / r^2, evaluated without cancellation near I_j.

        Writing f_c - s/2 with s = sign(c - z) on I_j gives the exact form
        -2 c^2 r^2 / (sqrt(D) (c^2 - r^2 - z^2 + s sqrt(D))), whose
        denominator only vanishes on the parts of the axis outside U_j.
        """
        self.check_chart(j)
        out = 0.0
        for i, c in enumerate(self.heights, start=1):
            _check_regular(c, r, z)
            s = 1.0 if i >= j else -1.0
            q = c * c + r * r + z * z
            sd = ad.sqrt(q * q - 4.0 * c * c * z * z)
            out = out - 2.0 * c * c / (sd * (c * c - r * r - z * z + s * sd))
        return out

    def ftilde(self, j: int, r, z):
        """Chart coefficient k_j + f of dtheta3."""
        return r * r * self.ftilde_over_r2(j, r, z)


def potential_V(config: MonopoleConfig, p: HyperbolicPoint) -> float:
    """V = 1 + sum of Green's functions, valid for any configuration."""
    out = 1.0
    for q in config.points:
        d = hyperbolic_distance(p, q)
        if d < TAU_GEO:
            raise SingularityError("evaluation at a monopole point")
        if config.toric:
            out += float(green(q.z, np.hypot(p.x, p.y), p.z))
        else:
            out += float(green_from_distance(d))
    return out


def chart_connection(config: MonopoleConfig, chart: int, r, z):
    if not np.all(config.in_chart(chart, r, z)):
        raise ChartDomainError(f"(r, z) outside chart U_{chart}")
    return config.ftilde(chart, r, z)


def transition(from_chart: int, to_chart: int, theta3):
    """Transition function g_{to,from} as an angle: (k_to - k_from) theta3.

    Since consecutive chart constants differ by one this is
    ``(to - from) * theta3`` for every n.  Fibre coordinates change by
    ``theta1_to = theta1_from - transition(from, to, theta3)`` so that the
    real connection form is chart independent.
    """
    return (to_chart - from_chart) * theta3


def change_chart(config: MonopoleConfig, from_chart: int, to_chart: int, pts: np.ndarray) -> np.ndarray:
    """Re-express (..., 4) chart points (r, theta3, z, theta1) in another chart."""
    config.check_chart(from_chart)
    config.check_chart(to_chart)
    out = np.array(pts, dtype=float, copy=True)
    out[..., 3] = out[..., 3] - transition(from_chart, to_chart, out[..., 1])
    return out


@dataclass(frozen=True)
class ChartPoint:
    """A point of the circle bundle in chart ``U_chart`` coordinates."""

    chart: int
    r: float
    theta3: float
    z: float
    theta1: float

    def __post_init__(self):
        if self.r < 0 or not self.z > 0:
            raise ValueError("chart point needs r >= 0 and z > 0")
        object.__setattr__(self, "theta3", float(np.mod(self.theta3, 2 * np.pi)))
        object.__setattr__(self, "theta1", float(np.mod(self.theta1, 2 * np.pi)))

    def validate(self, config: "MonopoleConfig") -> "ChartPoint":
        if not config.in_chart(self.chart, self.r, self.z):
            raise ChartDomainError(f"axis point z={self.z} is not in I_{self.chart}")
        return self

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.theta3, self.z, self.theta1])


@dataclass(frozen=True)
class TwoForm3:
    """Components of a 2-form on dr^dtheta3 and dz^dtheta3 (dr^dz part zero)."""

    dr_dth: np.ndarray
    dz_dth: np.ndarray


def _grad_rz(fn, r, z):
    r, z = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(z, dtype=float))
    jr, jz = ad.seed_dual(np.stack([r, z], axis=-1))
    out = fn(jr, jz)
    return out.val, out.eps[..., 0], out.eps[..., 1]


def star_dV(config: MonopoleConfig, r, z, orientation: int = -1) -> TwoForm3:
    """Hodge star of dV for the hyperbolic metric, as a multiple of dtheta3.

    For the orientation ``dr ^ dtheta3 ^ dz`` (``orientation=+1``) one gets
    ``(r/z)(V_z dr - V_r dz) ^ dtheta3``.  The closed-form potential ``f`` has
    ``df`` equal to minus that 1-form, so the default is the opposite
    orientation, for which ``d(f dtheta3) = *dV`` holds as written.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ChartDomainError("star_dV needs r > 0 (cylindrical coframe)")
    _, Vr, Vz = _grad_rz(config.V, r, z)
    return TwoForm3(orientation * r / z * Vz, -orientation * r / z * Vr)


def d_f_dtheta3(config: MonopoleConfig, r, z, shift: float = 0.0) -> TwoForm3:
    _, fr, fz = _grad_rz(lambda a, b: config.f(a, b) + shift, r, z)
    return TwoForm3(fr, fz)


def _fd(fn, r, z, h):
    """4th-order central differences in r and z."""
    def d(shift_r, shift_z):
        return (
            -fn(r + 2 * shift_r, z + 2 * shift_z)
            + 8 * fn(r + shift_r, z + shift_z)
            - 8 * fn(r - shift_r, z - shift_z)
            + fn(r - 2 * shift_r, z - 2 * shift_z)
        ) / (12 * h)

    return d(h, 0.0), d(0.0, h)


@dataclass(frozen=True)
class IdentityReport:
    residual_dual: float
    residual_fd: float
    worst_point: tuple[float, float]
    n_samples: int


def verify_curvature_identity(config: MonopoleConfig, samples, h: float = 1e-4, shift: float = 0.0) -> IdentityReport:
    """Check d(f dtheta3) = *dV at (r, z) samples with duals and with FD.

    ``*`` uses the default orientation of :func:`star_dV`.
    """
    s = np.asarray(samples, dtype=float)
    r, z = s[:, 0], s[:, 1]
    lhs = d_f_dtheta3(config, r, z, shift)
    rhs = star_dV(config, r, z)
    res = np.maximum(np.abs(lhs.dr_dth - rhs.dr_dth), np.abs(lhs.dz_dth - rhs.dz_dth))
    scale = h * max(1.0, float(np.max(z)))
    fr, fz = _fd(lambda a, b: config.f(a, b) + shift, r, z, scale)
    Vr, Vz = _fd(config.V, r, z, scale)
    res_fd = np.maximum(np.abs(fr + r / z * Vz), np.abs(fz - r / z * Vr))
    k = int(np.argmax(res))
    return IdentityReport(float(res.max()), float(res_fd.max()), (float(r[k]), float(z[k])), len(r))


def halton_rz(n: int, seed: int, lo: float = 0.1, hi: float = 5.0) -> np.ndarray:
    """Scrambled Halton samples in the square [lo, hi]^2 of the (r, z) plane."""
    pts = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    return qmc.scale(pts, [lo, lo], [hi, hi])
