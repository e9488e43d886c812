"""Small resolutions of the four nodes and the lifting census.

Each node lies on four torus-invariant cones (the ``D`` surfaces below).  A
small resolution at a node is fixed by which pair of cones through it is
blown up.  A projective automorphism lifts to a resolution exactly when, for
every node ``N``, it carries the blown-up pair at ``N`` to the blown-up pair
at the image node.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import groups
from .twistor import (
    SIGMA,
    TOL_SPAN,
    LinearQuadricIdeal,
    PoonModel,
    ProjAut,
    QuadraticForm6,
    _lin,
    _tl_quads,
    all_component_keys,
    b_matrix,
    c_matrix,
    case_two,
    classify_component,
    component_representative,
    invariant_conics,
    lambda_matrix,
    lambda_one,
    lambda_two,
    maps_singular_set,
    permute_ideals,
    span_preserved,
    span_rank,
)

LABELS = ("D1", "D1bar", "D2", "D2bar", "D3", "D3bar", "D4", "D4bar")
NODES = ("P1", "P1bar", "P3", "P3bar")

# the printed lifting components, keyed (case, first block, middle block, last block)
PRINTED_LIFTING = frozenset(
    {
        ("I", "diag", "I", "diag"),
        ("I", "offdiag", "I", "offdiag"),
        ("I", "diag", "J", "offdiag"),
        ("I", "offdiag", "J", "diag"),
        ("II", "diag", "-", "diag"),
        ("II", "offdiag", "-", "offdiag"),
        ("II", "diag", "+", "offdiag"),
        ("II", "offdiag", "+", "diag"),
    }
)


def divisor_cones(model: PoonModel) -> dict[str, LinearQuadricIdeal]:
    a, b = model.alpha, model.beta
    q1, q3 = _tl_quads(model)
    rows = {
        "D1": (_lin(z2=a, z3=-1j), _lin(w4=1), q1),
        "D1bar": (_lin(z2=a, z3=-1j), _lin(w5=1), q1),
        "D2": (_lin(z2=a, z3=1j), _lin(w4=1), q1),
        "D2bar": (_lin(z2=a, z3=1j), _lin(w5=1), q1),
        "D3": (_lin(z2=b, z3=-1j), _lin(w0=1), q3),
        "D3bar": (_lin(z2=b, z3=-1j), _lin(w1=1), q3),
        "D4": (_lin(z2=b, z3=1j), _lin(w0=1), q3),
        "D4bar": (_lin(z2=b, z3=1j), _lin(w1=1), q3),
    }
    return {k: LinearQuadricIdeal(k, np.stack([l1, l2]), q) for k, (l1, l2, q) in rows.items()}


def sigma_image(ideal: LinearQuadricIdeal) -> LinearQuadricIdeal:
    """Image under the real structure v -> S conj(v) (S is real and orthogonal)."""
    T = np.linalg.inv(SIGMA)
    return LinearQuadricIdeal(ideal.name, np.conj(ideal.linear) @ T, QuadraticForm6(T.T @ np.conj(ideal.quad.M) @ T))


def sigma_divisor_action(model: PoonModel) -> dict[str, str]:
    cones = divisor_cones(model)
    out = {}
    for k, d in cones.items():
        img = sigma_image(d)
        hits = [m for m, e in cones.items() if img.matches(e)]
        if len(hits) != 1:
            raise ValueError(f"real structure does not permute the cones (witness {k})")
        out[k] = hits[0]
    return out


class DivisorActionError(ValueError):
    pass


def divisor_action(U, model: PoonModel, tol: float = TOL_SPAN) -> dict[str, str]:
    res = permute_ideals(U, divisor_cones(model), tol)
    if not res.ok:
        raise DivisorActionError(f"image of {res.witness} matches no cone")
    return res.perm


# ----------------------------------------------------------- resolutions


@dataclass(frozen=True)
class SmallResolution:
    family: str  # "star" or "star_prime"
    variant: int  # 1 or 2 (complementary pairs)
    pairs: dict = field(init=False, compare=False)

    def __post_init__(self):
        if self.family not in ("star", "star_prime") or self.variant not in (1, 2):
            raise ValueError("family must be 'star' or 'star_prime' and variant 1 or 2")
        a = frozenset({"D1", "D2bar"})
        a_c = frozenset({"D1bar", "D2"})
        b = frozenset({"D3", "D4bar"})
        b_c = frozenset({"D3bar", "D4"})
        if self.family == "star_prime":
            b, b_c = b_c, b
        if self.variant == 2:
            a, a_c, b, b_c = a_c, a, b_c, b
        object.__setattr__(self, "pairs", {"P1": a, "P1bar": a_c, "P3": b, "P3bar": b_c})

    @property
    def label(self) -> str:
        return f"{self.family}/{self.variant}"


ALL_RESOLUTIONS = tuple(SmallResolution(f, v) for f in ("star", "star_prime") for v in (1, 2))


def real_compatible(res: SmallResolution, model: PoonModel) -> bool:
    """The real structure carries the pair at each node to the pair at the conjugate node."""
    sig = sigma_divisor_action(model)
    conj = {"P1": "P1bar", "P1bar": "P1", "P3": "P3bar", "P3bar": "P3"}
    return all(frozenset(sig[d] for d in res.pairs[n]) == res.pairs[conj[n]] for n in NODES)


@dataclass(frozen=True)
class LiftVerdict:
    lifts: bool
    reason: str
    pair_map: dict  # node -> (image node, image of its blown-up pair)


def lift_predicate(U, res: SmallResolution, model: PoonModel) -> LiftVerdict:
    nodes = maps_singular_set(U, model)
    if nodes is None:
        return LiftVerdict(False, "nodes not permuted", {})
    perm = divisor_action(U, model)
    pair_map = {}
    for n in NODES:
        img = frozenset(perm[d] for d in res.pairs[n])
        pair_map[n] = (nodes[n], img)
    for n in NODES:
        m, img = pair_map[n]
        rule = "rule 1 (node fixed)" if m == n else "rule 2 (conjugate node)" if m[:2] == n[:2] else "node exchange"
        if img != res.pairs[m]:
            return LiftVerdict(False, f"{rule} fails at {n}", pair_map)
    return LiftVerdict(True, "blow-up pairs map to blow-up pairs", pair_map)


@dataclass(frozen=True)
class ComponentVerdict:
    key: tuple
    lifts: bool
    verdict: LiftVerdict
    matrix: ProjAut


def enumerate_components(model: PoonModel, res: SmallResolution, seed: int = 0) -> list[ComponentVerdict]:
    rng = np.random.default_rng(seed)
    out = []
    for key in all_component_keys():
        U = component_representative(model, key, rng)
        if not span_preserved(U, model):
            raise AssertionError(f"representative of {key} does not preserve the model")
        v = lift_predicate(U, res, model)
        out.append(ComponentVerdict(key, v.lifts, v, U))
    return out


def lifting_keys(model: PoonModel, res: SmallResolution, seed: int = 0) -> frozenset:
    return frozenset(c.key for c in enumerate_components(model, res, seed) if c.lifts)


# ------------------------------------------------------------- ordering

L_SLOTS = {"L1": ("alpha", -1), "L2": ("alpha", 1), "L3": ("beta", -1), "L4": ("beta", 1)}
# boundary order of the four invariant lines read off from the octagon incidence
# for the (star-prime) family; the (star) family differs by the resolution at
# P3 and its conjugate, which exchanges the attachment slots of L3 and L4
_PRIME_ORDER = ("L1", "L4", "L3", "L2")


def boundary_order(family: str) -> tuple[str, ...]:
    if family == "star_prime":
        return _PRIME_ORDER
    if family == "star":
        swap = {"L3": "L4", "L4": "L3"}
        return tuple(swap.get(x, x) for x in _PRIME_ORDER)
    raise ValueError(f"unknown family {family!r}")


def boundary_values(model: PoonModel, order) -> tuple[float, ...]:
    val = {"alpha": model.alpha, "beta": model.beta}
    return tuple(s * val[k] for k, s in (L_SLOTS[x] for x in order))


def cyclic_realizable(seq) -> bool:
    """Whether distinct reals, read cyclically, can occur in this order on R u {inf}.

    The boundary circle of the hyperbolic plane meets the real values in their
    natural cyclic order, so the sequence must be a rotation of the sorted
    sequence or of its reverse.
    """
    seq = [float(x) for x in seq]
    if len(set(seq)) != len(seq):
        return False
    ranks = np.argsort(np.argsort(seq))
    n = len(seq)
    steps = {int((ranks[(i + 1) % n] - ranks[i]) % n) for i in range(n)}
    return steps == {1} or steps == {n - 1}


def ordering_check(model: PoonModel, family: str = "star") -> bool:
    if not 0 < model.alpha < model.beta:
        raise ValueError("need 0 < alpha < beta")
    return cyclic_realizable(boundary_values(model, boundary_order(family)))


# ------------------------------------------------------------ generators


@dataclass(frozen=True)
class Generators:
    Lambda1: ProjAut
    Lambda2: ProjAut
    Lambda: ProjAut
    residuals: dict


def generators(model: PoonModel) -> Generators:
    L1, L2, L = lambda_one(), lambda_two(), lambda_matrix(model)
    I = np.eye(6)
    res = {
        "Lambda1^2 - I": float(np.abs(L1.U @ L1.U - I).max()),
        "Lambda2^2 - I": float(np.abs(L2.U @ L2.U - I).max()),
        "Lambda^2 - alpha beta I": float(np.abs(L.U @ L.U - model.alpha * model.beta * I).max()),
    }
    return Generators(L1, L2, L, res)


@dataclass(frozen=True)
class QuotientResult:
    keys: list
    table: np.ndarray
    name: str | None
    subgroup_keys: list
    subgroup_name: str | None


def quotient_group(model: PoonModel, res: SmallResolution, seed: int = 0) -> QuotientResult:
    """Component group of the lifting automorphisms and of its block-diagonal part."""
    comps = [c for c in enumerate_components(model, res, seed) if c.lifts]
    keys = [c.key for c in comps]
    reps = {c.key: c.matrix for c in comps}
    ident = ("I", "diag", "I", "diag")
    order = [ident] + [k for k in keys if k != ident]
    n = len(order)
    T = np.zeros((n, n), dtype=int)
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            k = classify_component(reps[a].U @ reps[b].U)
            if k not in order:
                raise ValueError(f"product of {a} and {b} left the lifting set")
            T[i, j] = order.index(k)
    sub = [i for i, k in enumerate(order) if k[0] == "I"]
    Ts = np.array([[sub.index(T[i, j]) for j in sub] for i in sub])
    return QuotientResult(order, T, groups.identify(T), [order[i] for i in sub], groups.identify(Ts))


# ----------------------------------------------- torus conjugation relations


@dataclass(frozen=True)
class BCCheck:
    max_residual: dict  # pattern -> worst residual of the four identities
    exponents: dict  # pattern -> (e_B_right, e_C_right): U B(s) = U(a, s^e b), U C(t) = U(t^e a, b)
    orbit_exchange: bool
    lambda_products_ok: bool

    @property
    def ok(self) -> bool:
        return self.orbit_exchange and self.lambda_products_ok and max(self.max_residual.values()) < 1e-12


def _is_torus(M, which: str, tol=1e-12) -> bool:
    """M proportional to diag(s, 1/s, 1, 1, 1, 1) (which='B') or diag(1, 1, 1, 1, t, 1/t) ('C')."""
    M = M / M[2, 2]
    d = np.diag(M)
    off = np.abs(M - np.diag(d)).max()
    if which == "B":
        ok = np.allclose(d[2:], 1, atol=tol) and abs(d[0] * d[1] - 1) < tol
    else:
        ok = np.allclose(d[:4], 1, atol=tol) and abs(d[4] * d[5] - 1) < tol
    return bool(ok and off < tol)


def bc_conjugation_check(model: PoonModel, seed: int = 0, trials: int = 8) -> BCCheck:
    """Relations between B(s), C(t) and Case II matrices U(a, b).

    Left multiplication: B(s) U(a, b) = U(s a, b), C(t) U(a, b) = U(a, t b).
    Right multiplication gives U(a, s^e b) and U(t^e a, b) with e = -1 for an
    off-diagonal block and e = +1 for a diagonal one.
    """
    rng = np.random.default_rng(seed)
    worst, expo = {}, {}
    exchange = True
    for key in [k for k in all_component_keys() if k[0] == "II"]:
        _, x, m, y = key
        eb = -1 if y == "offdiag" else 1
        ec = -1 if x == "offdiag" else 1
        expo[key] = (eb, ec)
        r = 0.0
        for _ in range(trials):
            a = model.beta * np.exp(1j * rng.uniform(0, 2 * np.pi))
            b = model.alpha * np.exp(1j * rng.uniform(0, 2 * np.pi))
            s = np.exp(1j * rng.uniform(0, 2 * np.pi))
            t = np.exp(1j * rng.uniform(0, 2 * np.pi))
            U = lambda a_, b_: case_two(model, a_, b_, x, m, y).U  # noqa: E731
            B, C = b_matrix(s).U, c_matrix(t).U
            r = max(
                r,
                np.abs(B @ U(a, b) - U(s * a, b)).max(),
                np.abs(U(a, b) @ B - U(a, s**eb * b)).max(),
                np.abs(C @ U(a, b) - U(a, t * b)).max(),
                np.abs(U(a, b) @ C - U(t**ec * a, b)).max(),
            )
            Ui = np.linalg.inv(U(a, b))
            exchange &= _is_torus(U(a, b) @ B @ Ui, "C") and _is_torus(U(a, b) @ C @ Ui, "B")
        worst[key] = float(r)
    L = lambda_matrix(model).U
    prods = True
    for key in [k for k in all_component_keys() if k[0] == "I"]:
        H = component_representative(model, key, rng).U
        k2 = classify_component(H @ L)
        prods &= k2 is not None and k2[0] == "II" and span_preserved(H @ L, model)
    return BCCheck(worst, expo, bool(exchange), bool(prods))


def conics_from_cone_pairs(model: PoonModel) -> dict[str, tuple[str, str]]:
    """Each invariant conic is the intersection of a cone with its conjugate."""
    cones, conics = divisor_cones(model), invariant_conics(model)
    out = {}
    for name, conic in conics.items():
        for d, e in (("D1", "D1bar"), ("D2", "D2bar"), ("D3", "D3bar"), ("D4", "D4bar")):
            rows = np.vstack([cones[d].linear, cones[e].linear])
            if span_rank(np.vstack([rows, conic.linear])) == span_rank(rows) == 3:
                out[name] = (d, e)
    return out
