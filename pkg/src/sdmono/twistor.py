"""Projective model of the twistor space for two monopoles.

Homogeneous coordinates on CP^5 are ordered ``(w0, w1, z2, z3, w4, w5)``.
The model is the intersection of the quadrics

    h0   = 2 w0 w1 + lam z2^2 + (3/2) z3^2 + w4 w5,
    hinf =   w0 w1 +     z2^2 +       z3^2 + w4 w5,

with ``3/2 < lam < 2``.  Quadratic forms are symmetric matrices ``M`` with
``h(v) = v^T M v``; a projective map ``v -> U v`` sends the zero set of ``M``
to the zero set of ``U^{-T} M U^{-1}`` and linear forms ``l`` to ``l U^{-1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np
from scipy.linalg import null_space

VARS = ("w0", "w1", "z2", "z3", "w4", "w5")
TOL_SPAN = 1e-9
LAMBDA_RANGE = (1.5, 2.0)

# ------------------------------------------------------------ quadratic forms

@dataclass(frozen=True, eq=False)
class QuadraticForm6:
    """Symmetric complex coefficient matrix of a quadratic form in ``n`` variables."""

    M: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.M, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("coefficient matrix must be square")
        if not np.allclose(M, M.T, atol=1e-14):
            raise ValueError("coefficient matrix must be symmetric")
        object.__setattr__(self, "M", M)

    @classmethod
    def from_monomials(cls, terms: dict, n: int = 6, names=VARS) -> "QuadraticForm6":
        """Build from ``{("w0", "w1"): 2, ("z2", "z2"): lam, ...}``."""
        idx = {v: k for k, v in enumerate(names[:n])}
        M = np.zeros((n, n), dtype=complex)
        for (u, v), coef in terms.items():
            i, j = idx[u], idx[v]
            if i == j:
                M[i, i] += coef
            else:
                M[i, j] += coef / 2
                M[j, i] += coef / 2
        return cls(M)

    def __call__(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        return np.einsum("...i,ij,...j->...", v, self.M, v)

    def image(self, U) -> "QuadraticForm6":
        """Form cutting out the image of the zero set under ``v -> U v``."""
        Ui = np.linalg.inv(np.asarray(U, dtype=complex))
        return QuadraticForm6(Ui.T @ self.M @ Ui)

    def pullback(self, U) -> "QuadraticForm6":
        U = np.asarray(U, dtype=complex)
        return QuadraticForm6(U.T @ self.M @ U)

    def coefficients(self) -> np.ndarray:
        """Monomial coefficient vector (21 entries for six variables)."""
        n = len(self.M)
        return np.array([self.M[i, j] * (1 if i == j else 2) for i, j in combinations_with_replacement(range(n), 2)])


def span_rank(rows, tol: float = TOL_SPAN) -> int:
    """Numerical rank with row normalisation and relative singular-value cut."""
    A = np.atleast_2d(np.asarray(rows, dtype=complex))
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > tol * s[0]))


def proj_normalize(v) -> np.ndarray:
    """Scale a homogeneous vector so its largest-modulus entry is 1."""
    v = np.asarray(v, dtype=complex)
    return v / v[np.argmax(np.abs(v))]


def same_point(u, v, tol: float = 1e-10) -> bool:
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    k = np.argmax(np.abs(u))
    if abs(v[k]) < tol * np.abs(v).max():
        return False
    return bool(np.abs(u / u[k] - v / v[k]).max() < tol)


# -------------------------------------------------------------------- model


@dataclass(frozen=True, eq=False)
class PoonModel:
    lam: float
    alpha: float = field(init=False)
    beta: float = field(init=False)
    h0: QuadraticForm6 = field(init=False)
    hinf: QuadraticForm6 = field(init=False)
    singular_points: dict = field(init=False)

    def __post_init__(self):
        lam = float(self.lam)
        lo, hi = LAMBDA_RANGE
        if not lo < lam < hi:
            raise ValueError(f"lambda must lie in ({lo}, {hi}), got {lam}")
        object.__setattr__(self, "alpha", float(np.sqrt(4 - 2 * lam)))
        object.__setattr__(self, "beta", float(np.sqrt(2 * lam - 2)))
        h0 = QuadraticForm6.from_monomials({("w0", "w1"): 2, ("z2", "z2"): lam, ("z3", "z3"): 1.5, ("w4", "w5"): 1})
        hinf = QuadraticForm6.from_monomials({("w0", "w1"): 1, ("z2", "z2"): 1, ("z3", "z3"): 1, ("w4", "w5"): 1})
        object.__setattr__(self, "h0", h0)
        object.__setattr__(self, "hinf", hinf)
        e = np.eye(6, dtype=complex)
        object.__setattr__(self, "singular_points", {"P1": e[0], "P1bar": e[1], "P3": e[4], "P3bar": e[5]})

    @property
    def forms(self) -> tuple[QuadraticForm6, QuadraticForm6]:
        return self.h0, self.hinf

    def residual(self, v) -> np.ndarray:
        """max(|h0|, |hinf|) at (..., 6) points normalised to unit length."""
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v, axis=-1, keepdims=True)
        return np.maximum(np.abs(self.h0(v)), np.abs(self.hinf(v)))

    def jacobian_rank(self, v, tol: float = 1e-12) -> int:
        v = np.asarray(v, dtype=complex)
        G = np.stack([2 * self.h0.M @ v, 2 * self.hinf.M @ v])
        s = np.linalg.svd(G, compute_uv=False)
        return int(np.sum(s > tol * max(1.0, s[0])))


def build_poon_model(lam: float) -> PoonModel:
    return PoonModel(lam)


# ----------------------------------------------------------- real structure

SIGMA = np.zeros((6, 6), dtype=complex)
for _i, (_j, _s) in enumerate([(1, 1), (0, 1), (2, 1), (3, -1), (5, -1), (4, -1)]):
    SIGMA[_i, _j] = _s


def real_structure(v) -> np.ndarray:
    """(w0, w1, z2, z3, w4, w5) -> (conj w1, conj w0, conj z2, -conj z3, -conj w5, -conj w4)."""
    return np.asarray(np.conj(v), dtype=complex) @ SIGMA.T


# ------------------------------------------------------------- automorphisms


@dataclass(frozen=True, eq=False)
class ProjAut:
    """A projective linear map of CP^5 with its block description."""

    U: np.ndarray
    case: str | None = None  # "I", "II" or None for maps outside the block families
    pattern: tuple = ()
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        U = np.asarray(self.U, dtype=complex)
        if U.shape != (6, 6) or abs(np.linalg.det(U)) < 1e-300:
            raise ValueError("need an invertible 6x6 matrix")
        object.__setattr__(self, "U", U)
        if self.case == "I" and (np.any(U[0:2, 2:] != 0) or np.any(U[2:4, [0, 1, 4, 5]] != 0) or np.any(U[4:, :4] != 0)):
            raise ValueError("case I matrices are block diagonal")
        if self.case == "II" and (np.any(U[0:2, :4] != 0) or np.any(U[2:4, [0, 1, 4, 5]] != 0) or np.any(U[4:, 2:] != 0)):
            raise ValueError("case II matrices are block anti-diagonal")

    def __call__(self, v) -> np.ndarray:
        return np.asarray(v, dtype=complex) @ self.U.T

    def __matmul__(self, other: "ProjAut") -> "ProjAut":
        return ProjAut(self.U @ other.U)


def torus_action(s: complex, t: complex) -> ProjAut:
    return ProjAut(np.diag([s, 1 / s, 1, 1, t, 1 / t]).astype(complex), params={"s": s, "t": t})


def b_matrix(s: complex) -> ProjAut:
    return torus_action(s, 1.0)


def c_matrix(t: complex) -> ProjAut:
    return torus_action(1.0, t)


def sigma_scale(U) -> complex:
    """Least-squares mu with U S = mu S conj(U)."""
    U = U.U if isinstance(U, ProjAut) else np.asarray(U, dtype=complex)
    A, B = U @ SIGMA, SIGMA @ np.conj(U)
    return complex(np.vdot(B.ravel(), A.ravel()) / np.vdot(B.ravel(), B.ravel()))


def commutes_with_sigma(U, tol: float = TOL_SPAN) -> bool:
    """U o sigma = sigma o U as projective maps."""
    U = U.U if isinstance(U, ProjAut) else np.asarray(U, dtype=complex)
    mu = sigma_scale(U)
    A, B = U @ SIGMA, SIGMA @ np.conj(U)
    return bool(np.abs(A - mu * B).max() <= tol * np.abs(A).max())


def span_preserved(U, model: PoonModel, tol: float = TOL_SPAN, exact: bool = False) -> bool:
    """span{h0 o U, hinf o U} == span{h0, hinf}, via the rank of the 4x21 stack."""
    if exact:
        from .exact import exact_span_preserved

        return exact_span_preserved(U, model.lam)
    U = U.U if isinstance(U, ProjAut) else np.asarray(U, dtype=complex)
    rows = [h.coefficients() for h in model.forms] + [h.pullback(U).coefficients() for h in model.forms]
    return span_rank(rows, tol) == 2


def maps_singular_set(U, model: PoonModel, tol: float = 1e-10) -> dict | None:
    """The induced permutation of the four nodes, or None."""
    U = U.U if isinstance(U, ProjAut) else np.asarray(U, dtype=complex)
    out = {}
    for name, p in model.singular_points.items():
        hits = [m for m, q in model.singular_points.items() if same_point(U @ p, q, tol)]
        if len(hits) != 1:
            return None
        out[name] = hits[0]
    return out


# ---------------------------------------------------------- block families

_KIND = ("diag", "offdiag")


def _block(kind: str, a: complex, sign: float) -> np.ndarray:
    """[[a, 0], [0, sign conj a]] or [[0, a], [sign conj a, 0]]."""
    if kind == "diag":
        return np.array([[a, 0], [0, sign * np.conj(a)]], dtype=complex)
    if kind == "offdiag":
        return np.array([[0, a], [sign * np.conj(a), 0]], dtype=complex)
    raise ValueError(f"block kind must be one of {_KIND}")


def case_one(a: complex, b: complex, A11: str = "diag", A22: str = "I", A33: str = "diag", c: float = 1.0) -> ProjAut:
    """blockdiag(A11, c A22, A33) with A22 in {I, diag(1, -1)}."""
    if A22 not in ("I", "J"):
        raise ValueError("A22 must be 'I' or 'J' (= diag(1, -1))")
    U = np.zeros((6, 6), dtype=complex)
    U[0:2, 0:2] = _block(A11, a, 1)
    U[2:4, 2:4] = c * (np.eye(2) if A22 == "I" else np.diag([1.0, -1.0]))
    U[4:6, 4:6] = _block(A33, b, 1)
    return ProjAut(U, "I", (A11, A22, A33), {"a": a, "b": b, "c": c})


def case_two(
    model: PoonModel, a: complex, b: complex, A13: str = "diag", A22: str = "-", A31: str = "diag", c: complex = 1j
) -> ProjAut:
    """Rows (w0, w1) from (w4, w5) by A13, (w4, w5) from (w0, w1) by A31.

    ``A22 = c [[0, +-1], [alpha beta, 0]]``; the model is preserved for
    ``c = i``, ``|a| = beta`` and ``|b| = alpha``.
    """
    if A22 not in ("+", "-"):
        raise ValueError("A22 must be '+' or '-'")
    sgn = 1.0 if A22 == "+" else -1.0
    U = np.zeros((6, 6), dtype=complex)
    U[0:2, 4:6] = _block(A13, a, -1)
    U[2:4, 2:4] = c * np.array([[0, sgn], [model.alpha * model.beta, 0]])
    U[4:6, 0:2] = _block(A31, b, -1)
    return ProjAut(U, "II", (A13, A22, A31), {"a": a, "b": b, "c": c})


def component_key(U: ProjAut) -> tuple:
    return (U.case,) + tuple(U.pattern)


def all_component_keys() -> list[tuple]:
    """The 16 block patterns: 2^3 in each case."""
    keys = []
    for x in _KIND:
        for m in ("I", "J"):
            for y in _KIND:
                keys.append(("I", x, m, y))
    for x in _KIND:
        for m in ("-", "+"):
            for y in _KIND:
                keys.append(("II", x, m, y))
    return keys


def component_representative(model: PoonModel, key: tuple, rng: np.random.Generator | None = None) -> ProjAut:
    """A matrix on the constraint surface of the given component."""
    ph = (lambda: np.exp(1j * rng.uniform(0, 2 * np.pi))) if rng is not None else (lambda: 1.0)
    case, x, m, y = key
    if case == "I":
        return case_one(ph(), ph(), x, m, y)
    return case_two(model, model.beta * ph(), model.alpha * ph(), x, m, y)


def classify_component(U, tol: float = 1e-9) -> tuple | None:
    """Component key of a matrix that is, up to scale, a block-family member."""
    U = U.U if isinstance(U, ProjAut) else np.asarray(U, dtype=complex)
    U = U / np.abs(U).max()
    nz = np.abs(U) > tol
    mid = nz[2:4, 2:4]

    def kind(B):
        if B[0, 0] and B[1, 1] and not (B[0, 1] or B[1, 0]):
            return "diag"
        if B[0, 1] and B[1, 0] and not (B[0, 0] or B[1, 1]):
            return "offdiag"
        return None

    diag_blocks = nz[0:2, 0:2].any() or nz[4:6, 4:6].any()
    anti_blocks = nz[0:2, 4:6].any() or nz[4:6, 0:2].any()
    if nz[0:2, 2:4].any() or nz[2:4, [0, 1, 4, 5]].any() or nz[4:6, 2:4].any() or diag_blocks == anti_blocks:
        return None
    if diag_blocks:
        x, y = kind(nz[0:2, 0:2]), kind(nz[4:6, 4:6])
        if x is None or y is None or kind(mid) != "diag":
            return None
        ratio = U[3, 3] / U[2, 2]
        m = "I" if abs(ratio - 1) < 1e-6 else "J" if abs(ratio + 1) < 1e-6 else None
        return None if m is None else ("I", x, m, y)
    x, y = kind(nz[0:2, 4:6]), kind(nz[4:6, 0:2])
    if x is None or y is None or kind(mid) != "offdiag":
        return None
    ratio = U[2, 3] / U[3, 2]
    m = "+" if ratio.real > 0 else "-"
    return ("II", x, m, y)


def lambda_matrix(model: PoonModel) -> ProjAut:
    """The Case II involution with Lambda^2 = alpha beta I."""
    a, b = model.alpha, model.beta
    L = np.zeros((6, 6), dtype=complex)
    L[0, 4], L[1, 5] = b, -b
    L[2, 3], L[3, 2] = -1j, 1j * a * b
    L[4, 0], L[5, 1] = a, -a
    return ProjAut(L, "II", ("diag", "-", "diag"), {"a": b, "b": a, "c": 1j})


def lambda_one() -> ProjAut:
    U = np.zeros((6, 6), dtype=complex)
    U[0, 0] = U[1, 1] = U[2, 2] = 1
    U[3, 3] = -1
    U[4, 5] = U[5, 4] = 1
    return ProjAut(U, "I", ("diag", "J", "offdiag"), {"a": 1, "b": 1, "c": 1})


def lambda_two() -> ProjAut:
    U = np.zeros((6, 6), dtype=complex)
    U[0, 1] = U[1, 0] = 1
    U[2, 2] = U[4, 4] = U[5, 5] = 1
    U[3, 3] = -1
    return ProjAut(U, "I", ("offdiag", "J", "diag"), {"a": 1, "b": 1, "c": 1})


U0 = ProjAut(np.diag([1, 1, 1, -1, 1, 1]).astype(complex))

# ----------------------------------------------- linear-plus-quadric ideals


@dataclass(frozen=True, eq=False)
class LinearQuadricIdeal:
    """Subvariety {l_1 = ... = l_k = 0, q = 0}: linear rows plus one quadric."""

    name: str
    linear: np.ndarray  # (k, 6)
    quad: QuadraticForm6

    def image(self, U) -> "LinearQuadricIdeal":
        U = U.U if isinstance(U, ProjAut) else np.asarray(U, dtype=complex)
        return LinearQuadricIdeal(self.name, np.asarray(self.linear) @ np.linalg.inv(U), self.quad.image(U))

    def contains(self, v, tol: float = 1e-10) -> bool:
        v = proj_normalize(v)
        return bool(np.abs(self.linear @ v).max() < tol and abs(self.quad(v)) < tol)

    def matches(self, other: "LinearQuadricIdeal", tol: float = TOL_SPAN) -> bool:
        k = len(self.linear)
        if len(other.linear) != k or span_rank(np.vstack([self.linear, other.linear]), tol) != k:
            return False
        K = null_space(np.asarray(self.linear, dtype=complex))
        q1, q2 = K.T @ self.quad.M @ K, K.T @ other.quad.M @ K
        return span_rank([q1.ravel(), q2.ravel()], tol) == 1


def _lin(**coefs) -> np.ndarray:
    row = np.zeros(6, dtype=complex)
    for k, v in coefs.items():
        row[VARS.index(k)] = v
    return row


def _tl_quads(model: PoonModel):
    lam = model.lam
    q1 = QuadraticForm6.from_monomials({("w0", "w1"): 1, ("z2", "z2"): 2 * lam - 3})
    q3 = QuadraticForm6.from_monomials({("z2", "z2"): 3 - 2 * lam, ("w4", "w5"): 1})
    return q1, q3


def invariant_conics(model: PoonModel) -> dict[str, LinearQuadricIdeal]:
    """The four torus-invariant conics tl1..tl4."""
    a, b = model.alpha, model.beta
    q1, q3 = _tl_quads(model)
    return {
        "tl1": LinearQuadricIdeal("tl1", np.stack([_lin(z2=a, z3=-1j), _lin(w4=1), _lin(w5=1)]), q1),
        "tl2": LinearQuadricIdeal("tl2", np.stack([_lin(z2=a, z3=1j), _lin(w4=1), _lin(w5=1)]), q1),
        "tl3": LinearQuadricIdeal("tl3", np.stack([_lin(z2=b, z3=-1j), _lin(w0=1), _lin(w1=1)]), q3),
        "tl4": LinearQuadricIdeal("tl4", np.stack([_lin(z2=b, z3=1j), _lin(w0=1), _lin(w1=1)]), q3),
    }


@dataclass(frozen=True)
class PermutationResult:
    ok: bool
    perm: dict | None
    witness: str | None = None  # label of an object whose image matched nothing


def permute_ideals(U, catalogue: dict[str, LinearQuadricIdeal], tol: float = TOL_SPAN) -> PermutationResult:
    perm = {}
    for name, ideal in catalogue.items():
        img = ideal.image(U)
        hits = [m for m, other in catalogue.items() if img.matches(other, tol)]
        if len(hits) != 1:
            return PermutationResult(False, None, name)
        perm[name] = hits[0]
    if len(set(perm.values())) != len(perm):
        return PermutationResult(False, None, "non-injective")
    return PermutationResult(True, perm)


def conic_set_preserved(U, model: PoonModel, tol: float = TOL_SPAN) -> PermutationResult:
    return permute_ideals(U, invariant_conics(model), tol)


# ----------------------------------------------------------- variety points


def sample_variety(model: PoonModel, n: int, seed: int) -> np.ndarray:
    """Points of the model: random (w0, w4, z2, z3), then solve linearly for w1, w5.

    Both quadrics are linear in the products X = w0 w1 and Y = w4 w5.
    """
    rng = np.random.default_rng(seed)
    g = lambda: rng.normal(size=n) + 1j * rng.normal(size=n)  # noqa: E731
    w0, w4, z2, z3 = g(), g(), g(), g()
    A = z2 * z2 + z3 * z3
    B = model.lam * z2 * z2 + 1.5 * z3 * z3
    X = A - B
    Y = B - 2 * A
    return np.stack([w0, X / w0, z2, z3, w4, Y / w4], axis=-1)


# ------------------------------------------------------ minitwistor spaces

SIDE_INDEX = {1: [2, 3, 4, 5], 3: [0, 1, 2, 3]}
SIDE_DROPPED = {1: (0, 1), 3: (4, 5)}


def _check_side(side: int):
    if side not in SIDE_INDEX:
        raise ValueError("side must be 1 or 3")


def minitwistor_projection(side: int, v) -> np.ndarray:
    _check_side(side)
    return np.asarray(v, dtype=complex)[..., SIDE_INDEX[side]]


def image_quadric(side: int, model: PoonModel) -> QuadraticForm6:
    """Eliminate the dropped product (w0 w1 or w4 w5) from the quadric pair."""
    _check_side(side)
    i, j = SIDE_DROPPED[side]
    m0, mi = model.h0.M[i, j], model.hinf.M[i, j]
    M = mi * model.h0.M - m0 * model.hinf.M
    keep = SIDE_INDEX[side]
    M = M[np.ix_(keep, keep)]
    # scale so the surviving product term reads 2 w w'
    p = (2, 3) if side == 1 else (0, 1)
    return QuadraticForm6(M / M[p])


def side_real_structure(side: int) -> np.ndarray:
    """Matrix S with sigma(v) = S conj(v) on the projected CP^3."""
    _check_side(side)
    k = SIDE_INDEX[side]
    return SIGMA[np.ix_(k, k)]


# ------------------------------------------------------ Einstein-Weyl layer


@dataclass(frozen=True)
class EWPoint:
    """Real plane in a minitwistor CP^3.

    side 1: z2 = i b z3 + c w4 - conj(c) w5;
    side 3 ("plane"): z2 = i b z3 + c w0 + conj(c) w1;
    side 3 ("disc"): z3 = c w0 - conj(c) w1 (b unused).
    """

    side: int
    b: float
    c: complex
    branch: str = "plane"

    def plane(self) -> np.ndarray:
        b, c = self.b, complex(self.c)
        if self.side == 1:
            return np.array([1, -1j * b, -c, np.conj(c)])
        if self.branch == "plane":
            return np.array([-c, -np.conj(c), 1, -1j * b])
        if self.branch == "disc":
            return np.array([-c, np.conj(c), 0, 1])
        raise ValueError(f"unknown branch {self.branch!r}")


def ew_admissible(side: int, b: float, c: complex, model: PoonModel, branch: str = "plane") -> bool:
    """Region test for real planes whose section of the image quadric has no real point."""
    _check_side(side)
    c2 = abs(c) ** 2
    if side == 1:
        return bool(b * b + 2 * c2 < 1 / model.alpha**2)
    if branch == "plane":
        return bool(b * b - 2 * c2 > 1 / model.beta**2)
    if branch == "disc":
        return bool(c2 < 0.5)
    raise ValueError(f"unknown branch {branch!r}")


def _real_basis(S: np.ndarray) -> np.ndarray:
    """Real basis (columns) of the fixed set {v : S conj(v) = v}."""
    n = len(S)
    cols = []
    for k in range(n):
        for u in (np.eye(n)[k], 1j * np.eye(n)[k]):
            cols.append(u + S @ np.conj(u))
    A = np.array(cols).T
    # orthonormalise as a real 2n-dimensional set and keep n directions
    R = np.vstack([A.real, A.imag])
    Q, s, _ = np.linalg.svd(R, full_matrices=False)
    Q = Q[:, s > 1e-12 * s[0]]
    return Q[:n] + 1j * Q[n:]


@dataclass(frozen=True)
class RealPointTest:
    has_real_point: bool
    eigenvalues: np.ndarray
    witness: np.ndarray | None  # a real point of the section, if any


def real_point_test(p: EWPoint, model: PoonModel) -> RealPointTest:
    """Restrict the image quadric to the real points of the plane and test definiteness."""
    S = side_real_structure(p.side)
    R = _real_basis(S)  # 4 x 4, real points are R x with x real
    ell = p.plane() @ R
    if np.abs(ell).max() == 0:
        raise ValueError("degenerate plane")
    K = null_space(np.vstack([ell.real, ell.imag]))
    if K.shape[1] != 3:
        raise ValueError("plane is not real for the induced real structure")
    B = R @ K
    Q = B.T @ image_quadric(p.side, model).M @ B
    Q = 0.5 * (Q + Q.T)
    if np.abs(Q.imag).max() > 1e-9 * max(1.0, np.abs(Q).max()):
        raise ValueError("restricted form is not real")
    ev, V = np.linalg.eigh(Q.real)
    scale = np.abs(ev).max()
    if ev[0] > 1e-12 * scale or ev[-1] < -1e-12 * scale:
        return RealPointTest(False, ev, None)
    lo, hi = ev[0], ev[-1]
    x = np.sqrt(max(hi, 0)) * V[:, 0] + np.sqrt(max(-lo, 0)) * V[:, -1]
    return RealPointTest(True, ev, B @ x)


def plane_action(U4: np.ndarray, p: EWPoint, target_side: int | None = None) -> EWPoint:
    """Image of a real plane under a linear map of CP^3 (or between the two CP^3's)."""
    side = target_side or p.side
    ell = p.plane() @ np.linalg.inv(np.asarray(U4, dtype=complex))
    if side == 1:
        ell = ell / ell[0]
        return EWPoint(1, float((1j * ell[1]).real), complex(-ell[2]))
    if abs(ell[2]) > 1e-12 * np.abs(ell).max():
        ell = ell / ell[2]
        return EWPoint(3, float((1j * ell[3]).real), complex(-ell[0]))
    ell = ell / ell[3]
    return EWPoint(3, 0.0, complex(-ell[0]), "disc")


def side_block(U, side: int) -> np.ndarray:
    """Action of a block-diagonal map on a projected CP^3."""
    U = U.U if isinstance(U, ProjAut) else np.asarray(U, dtype=complex)
    k = SIDE_INDEX[side]
    rest = [i for i in range(6) if i not in k]
    if np.abs(U[np.ix_(k, rest)]).max() > 0 or np.abs(U[np.ix_(rest, k)]).max() > 0:
        raise ValueError("map does not descend to this projection")
    return U[np.ix_(k, k)]


def ew_involutions(b: float, c: complex) -> dict[str, tuple[float, complex]]:
    c = complex(c)
    return {"phi1": (-b, -np.conj(c)), "phi2": (-b, c), "phi3": (b, -np.conj(c))}


def ew_monopole_images(model: PoonModel) -> list[EWPoint]:
    """Images of the two isolated fixed points on side 1."""
    return [EWPoint(1, 1 / model.beta, 0j), EWPoint(1, -1 / model.beta, 0j)]


def lambda_dual_action(b3: float, c3: complex, model: PoonModel) -> tuple[float, complex]:
    """(b', c') -> (-1/(alpha beta b'), -i c'/(alpha b')) as printed for the dual map."""
    if b3 == 0:
        raise ZeroDivisionError("pole of the dual action at b' = 0")
    a, b = model.alpha, model.beta
    return -1 / (a * b * b3), -1j * complex(c3) / (a * b3)


def lambda_plane_action(b3: float, c3: complex, model: PoonModel) -> tuple[float, complex]:
    """The dual map recomputed from the matrix in the plane parameters (b', c') -> (b, c).

    Pulling the side-3 plane back through Lambda gives
    ``(1/(alpha beta b'), c'/(alpha b'))``.  It differs from
    :func:`lambda_dual_action` by ``(b, c) -> (-b, i c)``: the printed
    formula treats the raw dual coordinate of z3, which is imaginary on real
    planes, as the real parameter.
    """
    if b3 == 0:
        raise ZeroDivisionError("pole of the dual action at b' = 0")
    ell = EWPoint(3, b3, c3).plane() @ lambda_cross_block(model)
    ell = ell / ell[0]
    return float((1j * ell[1]).real), complex(-ell[2])


def lambda_cross_block(model: PoonModel) -> np.ndarray:
    """Lambda as a map from (z2, z3, w4, w5) to (w0, w1, z2, z3)."""
    L = lambda_matrix(model).U
    return L[np.ix_(SIDE_INDEX[3], SIDE_INDEX[1])]


@dataclass(frozen=True)
class AngularShift:
    shift: float  # Arg(c) - Arg(c') for b' > 0, reduced to (-pi, pi]
    constant: float  # the same shift reduced to [0, 2 pi)
    max_spread: float  # deviation of the shift over the samples

    def induced(self, theta3, theta1):
        """Angular map (theta3, theta1) -> (theta1 + shift, theta3 - shift) of the involution."""
        return np.mod(theta1 + self.shift, 2 * np.pi), np.mod(theta3 - self.shift, 2 * np.pi)


def angular_shift_check(model: PoonModel, samples: int = 64, seed: int = 0) -> AngularShift:
    """Arg shift of the dual action on c for b' > 0.

    Arg(c) plays the role of theta3 on side 1 and Arg(c') of theta1 on side 3;
    an involution with theta3 = theta1 + shift has the angular map returned
    by :meth:`AngularShift.induced`.
    """
    rng = np.random.default_rng(seed)
    b3 = rng.uniform(0.1, 3.0, samples)
    c3 = rng.normal(size=samples) + 1j * rng.normal(size=samples)
    shifts = []
    for bb, cc in zip(b3, c3):
        _, c1 = lambda_dual_action(bb, cc, model)
        shifts.append(np.angle(c1 / cc))
    shifts = np.array(shifts)
    s = float(shifts[0])
    return AngularShift(s, float(np.mod(s, 2 * np.pi)), float(np.abs(np.angle(np.exp(1j * (shifts - s)))).max()))


# --------------------------------------------------- semi-free subgroups


def subgroup_weights(n: int, label: str, k: int | None = None) -> list[int]:
    """Weights of a circle subgroup on the n + 2 invariant curves.

    The torus acts by t, s^-1, t s^-1, ..., t s^-n.  ``label`` is "t=1"
    (parameter s), "s=1" (parameter t) or "t=s^k" (parameter s).
    """
    if label == "t=1":
        return [0, -1] + [-j for j in range(1, n + 1)]
    if label == "s=1":
        return [1, 0] + [1] * n
    if label == "t=s^k":
        if k is None or not 1 <= k <= n:
            raise ValueError("need 1 <= k <= n")
        return [k - j for j in range(0, n + 1)] + [-1]
    raise ValueError(f"unknown subgroup {label!r}")


def is_semifree(weights) -> bool:
    w = set(weights)
    return w <= {-1, 0, 1} and w != {0}


def semifree_circle_subgroups(n: int) -> list[str]:
    if n < 2:
        raise ValueError("need n >= 2")
    cands = [("t=1", None), ("s=1", None)] + [("t=s^k", k) for k in range(1, n + 1)]
    out = []
    for label, k in cands:
        if is_semifree(subgroup_weights(n, label, k)):
            out.append("{s=1}" if label == "s=1" else "{t=1}" if label == "t=1" else "{t=s}" if k == 1 else f"{{t=s^{k}}}")
    return out
