"""Generic 4D curvature engine.

A metric is supplied as a callable ``metric_fn(x)`` taking a list of four
coordinate arrays (or jets) and returning a 4x4 metric with value shape
``(N, 4, 4)``.  Derivatives come either from hyper-dual seeding (exact to
rounding) or from 4th-order central differences (independent oracle).

Index conventions: ``dg[..., a, b, e] = d_e g_ab``,
``Gamma[..., a, b, c] = Gamma^a_bc``, ``Riem[..., a, b, c, d] = R^a_bcd`` with
``R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - ...``,
Ricci ``R_bd = R^a_bad``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import autodiff as ad

# basis of 2-forms in an oriented orthonormal frame: 01, 02, 03, 23, 31, 12
PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))
HODGE6 = np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]])


@dataclass(frozen=True)
class Curvature:
    g: np.ndarray
    ginv: np.ndarray
    christoffel: np.ndarray
    riemann_up: np.ndarray
    riemann: np.ndarray  # all indices down
    ricci: np.ndarray
    scalar: np.ndarray
    weyl: np.ndarray  # all indices down
    weyl_plus: np.ndarray  # 6x6 blocks in an orthonormal frame
    weyl_minus: np.ndarray
    riemann_frame_norm: np.ndarray

    @property
    def weyl_plus_norm(self) -> np.ndarray:
        return np.linalg.norm(self.weyl_plus, axis=(-2, -1))

    @property
    def weyl_minus_norm(self) -> np.ndarray:
        return np.linalg.norm(self.weyl_minus, axis=(-2, -1))

    def bianchi_residual(self) -> np.ndarray:
        R = self.riemann
        cyc = R + np.einsum("...abcd->...acdb", R) + np.einsum("...abcd->...adbc", R)
        return np.abs(cyc).max(axis=(-4, -3, -2, -1))


def metric_derivatives_hyperdual(metric_fn, pts):
    x = ad.seed_hyperdual(np.asarray(pts, dtype=float))
    G = metric_fn(x)
    n = np.shape(pts)[:-1]
    if not isinstance(G, ad.HyperDual):  # metric independent of coordinates
        G = np.broadcast_to(G, n + (4, 4))
        return G, np.zeros(n + (4, 4, 4)), np.zeros(n + (4, 4, 4, 4))
    return (
        np.broadcast_to(G.val, n + (4, 4)),
        np.broadcast_to(G.d1, n + (4, 4, 4)),
        np.broadcast_to(G.d2, n + (4, 4, 4, 4)),
    )


_W1 = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))
_W2 = ((-2, -1.0 / 12), (-1, 16.0 / 12), (0, -30.0 / 12), (1, 16.0 / 12), (2, -1.0 / 12))


def metric_derivatives_fd(metric_fn, pts, h: float = 1e-4):
    """4th-order central differences for first and second metric derivatives."""
    pts = np.asarray(pts, dtype=float)

    def G(shift):
        y = pts + shift
        return np.asarray(metric_fn([y[..., k] for k in range(4)]), dtype=float)

    g = np.broadcast_to(G(np.zeros(4)), pts.shape[:-1] + (4, 4))
    eye = np.eye(4) * h
    dg = np.zeros(g.shape + (4,))
    ddg = np.zeros(g.shape + (4, 4))
    for e in range(4):
        dg[..., e] = sum(w * G(k * eye[e]) for k, w in _W1) / h
        ddg[..., e, e] = sum(w * G(k * eye[e]) for k, w in _W2) / h**2
    for e, f in product(range(4), repeat=2):
        if e < f:
            acc = sum(wi * wj * G(ki * eye[e] + kj * eye[f]) for (ki, wi), (kj, wj) in product(_W1, _W1))
            ddg[..., e, f] = ddg[..., f, e] = acc / h**2
    return g, dg, ddg


def orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Columns E[:, i] with E^T g E = I and det E > 0."""
    L = np.linalg.cholesky(g)
    return np.swapaxes(np.linalg.inv(L), -1, -2)


def curvature_from_derivatives(g, dg, ddg) -> Curvature:
    ginv = np.linalg.inv(g)
    # Christoffel symbols of the first kind Gamma_{a b c}
    G1 = 0.5 * (np.einsum("...acb->...abc", dg) + dg - np.einsum("...bca->...abc", dg))
    Gam = np.einsum("...ad,...dbc->...abc", ginv, G1)
    # d_e Gamma_{abc}
    dG1 = 0.5 * (
        np.einsum("...acbe->...abce", ddg) + ddg - np.einsum("...bcae->...abce", ddg)
    )
    dginv = -np.einsum("...ap,...pqe,...qd->...ade", ginv, dg, ginv)
    dGam = np.einsum("...ade,...dbc->...abce", dginv, G1) + np.einsum("...ad,...dbce->...abce", ginv, dG1)
    # R^a_{bcd}
    Rup = (
        np.einsum("...adbc->...abcd", dGam)
        - np.einsum("...acbd->...abcd", dGam)
        + np.einsum("...ace,...edb->...abcd", Gam, Gam)
        - np.einsum("...ade,...ecb->...abcd", Gam, Gam)
    )
    R = np.einsum("...ae,...ebcd->...abcd", g, Rup)
    Ric = np.einsum("...abad->...bd", Rup)
    S = np.einsum("...bd,...bd->...", ginv, Ric)
    gg = lambda A, B: (  # noqa: E731  Kulkarni-Nomizu product
        np.einsum("...ac,...bd->...abcd", A, B)
        + np.einsum("...bd,...ac->...abcd", A, B)
        - np.einsum("...ad,...bc->...abcd", A, B)
        - np.einsum("...bc,...ad->...abcd", A, B)
    )
    Sx = S[..., None, None, None, None]
    W = R - 0.5 * gg(g, Ric) + (Sx / 12.0) * gg(g, g)
    E = orthonormal_frame(g)
    Wf = np.einsum("...abcd,...ai,...bj,...ck,...dl->...ijkl", W, E, E, E, E)
    Rf = np.einsum("...abcd,...ai,...bj,...ck,...dl->...ijkl", R, E, E, E, E)
    W6 = np.stack([np.stack([Wf[..., i, j, k, l] for (k, l) in PAIRS], axis=-1) for (i, j) in PAIRS], axis=-2)
    Pp = 0.5 * (np.eye(6) + HODGE6)
    Pm = 0.5 * (np.eye(6) - HODGE6)
    return Curvature(
        g=g,
        ginv=ginv,
        christoffel=Gam,
        riemann_up=Rup,
        riemann=R,
        ricci=Ric,
        scalar=S,
        weyl=W,
        weyl_plus=Pp @ W6 @ Pp,
        weyl_minus=Pm @ W6 @ Pm,
        riemann_frame_norm=np.sqrt(np.einsum("...ijkl,...ijkl->...", Rf, Rf)),
    )


def curvature(metric_fn, pts, method: str = "hyperdual", h: float = 1e-4) -> Curvature:
    if method == "hyperdual":
        return curvature_from_derivatives(*metric_derivatives_hyperdual(metric_fn, pts))
    if method == "fd":
        return curvature_from_derivatives(*metric_derivatives_fd(metric_fn, pts, h))
    raise ValueError(f"unknown differentiation method {method!r}")


# -- reference metrics for engine sanity checks


def euclidean_metric(x):
    return np.eye(4)


def round_sphere_metric(x):
    """Stereographic round metric 4/(1+|x|^2)^2 delta on S^4."""
    r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]
    phi = 4.0 / ((1.0 + r2) * (1.0 + r2))
    zero = 0.0 * phi
    return ad.stack([ad.stack([phi if i == j else zero for j in range(4)]) for i in range(4)])
