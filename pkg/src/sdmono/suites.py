"""Verification suites run by the command-line front end.

Each suite returns a :class:`SuiteResult` made of named checks.  A check
records its measured value, its tolerance and, when it fails, a witness.
Checks that do not apply to the configured monopoles are recorded as skipped
(and count as passed).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import groups
from .config import RunConfig
from .lift import (
    extra_involution,
    fixed_axis_intervals,
    identity_map,
    image_distance,
    lift_rotation,
    map_group,
    random_chart_points,
    reflection_generators,
    verify_conformal,
)
from .metric import self_duality, sample_chart_points, weyl_decomposition
from .monopole import halton_rz, transition, verify_curvature_identity
from .hyperbolic import StabilizerClass, stabilizer_class

# suite catalogue: check id -> statement it verifies
CATALOGUE: dict[str, list[tuple[str, str]]] = {
    "connection-identity": [
        ("identity-dual", "d(f dtheta3) = *dV with dual-number derivatives"),
        ("identity-fd", "the same identity under a finite-difference oracle"),
        ("axis-values", "f(0, z) is constant on each axis interval with the chart values"),
        ("transition", "transition angles form a cocycle; g21 = exp(i theta3)"),
        ("fixed-intervals", "k-lifted rotations fix the axis fibres over exactly one interval"),
    ],
    "curvature": [
        ("scalar-flat", "scalar curvature of the metric vanishes"),
        ("self-dual", "one Weyl half vanishes, the same half everywhere"),
    ],
    "conformality": [
        ("rotations", "k-lifts of rotations are conformal with factor (z o Phi / z)^2"),
        ("reflections", "lifts Phi1, Phi2, Phi3 of the reflections are conformal"),
        ("extra-involution", "§3.2 / Theorem final"),
    ],
    "involution-group": [
        ("reflection-group", "{Id, Phi1, Phi2, Phi3} is Z2 x Z2 (Z2 without the end-swap symmetry)"),
        ("full-group", "adding the extra involution gives D4 for two monopoles"),
    ],
    "twistor-classification": [
        ("model", "the four nodes lie on both quadrics with rank-one Jacobian; sigma is an involution"),
        ("torus", "the torus commutes with sigma iff |s| = |t| = 1"),
        ("sweep", "span test agrees with the block-parameter constraints"),
        ("components", "16 block components preserve the model and the node set"),
        ("conics", "U0 and Lambda permute the four invariant conics as stated"),
        ("projections", "images of the two projections are nonsingular quadrics"),
        ("exact", "exact-arithmetic span test on all 16 components (exact mode)"),
    ],
    "resolution-lift": [
        ("census", "8 of 16 components lift under both star resolutions, matching the printed lists"),
        ("quotient", "component group is D4 with block-diagonal part Z2 x Z2"),
        ("ordering", "the star-prime boundary order is not realisable; the star order is"),
        ("generators", "Lambda1^2 = Lambda2^2 = I and Lambda^2 = alpha beta I"),
        ("torus-conjugation", "Case II matrices exchange the two C* orbit structures"),
    ],
    "einstein-weyl": [
        ("regions", "region inequalities agree with the no-real-point test"),
        ("involutions", "phi relations and monopole images"),
        ("dual-action", "the dual map sends admissible side-3 planes to admissible side-1 planes"),
        ("angular-shift", "angular shift 3 pi / 2 and agreement with Lambda~(pi/2)"),
    ],
}


def catalogue_lines() -> list[str]:
    return [f"{suite}:{cid} → {stmt}" for suite, checks in CATALOGUE.items() for cid, stmt in checks]


@dataclass
class Check:
    passed: bool
    value: object = None
    tol: float | None = None
    witness: object = None
    skipped: str | None = None

    def to_dict(self) -> dict:
        d = {"passed": bool(self.passed), "value": _jsonable(self.value), "tol": self.tol}
        if self.witness is not None and not self.passed:
            d["witness"] = _jsonable(self.witness)
        if self.skipped:
            d["skipped"] = self.skipped
        return d


@dataclass
class SuiteResult:
    name: str
    checks: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self, timing: bool = True) -> dict:
        d = {"passed": self.passed, "checks": {k: c.to_dict() for k, c in self.checks.items()}}
        if timing:
            d["wall_time"] = round(self.wall_time, 3)
        return d


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _skip(reason: str) -> Check:
    return Check(True, None, None, None, reason)


def _le(value: float, tol: float, witness=None) -> Check:
    return Check(bool(value <= tol), float(value), float(tol), witness)


# --------------------------------------------------------------- suites


def suite_connection_identity(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("connection-identity")
    mc = cfg.monopoles()
    if not mc.toric:
        for cid, _ in CATALOGUE["connection-identity"]:
            res.checks[cid] = _skip("needs monopoles on a common geodesic through the z-axis")
        return res
    rep = verify_curvature_identity(mc, halton_rz(cfg.samples["identity"], cfg.seed))
    res.checks["identity-dual"] = _le(rep.residual_dual, cfg.tolerances["tol_identity"], rep.worst_point)
    res.checks["identity-fd"] = _le(rep.residual_fd, 1e-4, rep.worst_point)
    worst, wit = 0.0, None
    for j in mc.charts:
        lo, hi = mc.interval(j)
        zs = np.linspace(lo, min(hi, lo + 10.0), 27)[1:-1]
        err = np.abs(mc.f(np.zeros_like(zs), zs) + mc.chart_constant(j))
        if err.max() > worst:
            worst, wit = float(err.max()), {"chart": j, "z": float(zs[np.argmax(err)])}
    res.checks["axis-values"] = _le(worst, 1e-12, wit)
    th = np.random.default_rng(cfg.seed).uniform(0, 2 * np.pi, 50)
    cyc = np.abs(np.angle(np.exp(1j * (transition(1, 2, th) + transition(2, 1, th))))).max()
    g21 = np.abs(np.exp(1j * transition(1, 2, th)) - np.exp(1j * th)).max()
    res.checks["transition"] = _le(max(cyc, g21), 1e-12)
    ok, got = True, {}
    for k in (-1, 0, 1):
        got[k] = fixed_axis_intervals(mc, k)
        exp = [2 - k] if 1 <= 2 - k <= mc.n + 1 else []
        ok &= got[k] == exp
    res.checks["fixed-intervals"] = Check(ok, got, None, got)
    return res


def suite_curvature(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("curvature")
    mc = cfg.monopoles()
    if not mc.toric:
        for cid, _ in CATALOGUE["curvature"]:
            res.checks[cid] = _skip("needs monopoles on a common geodesic through the z-axis")
        return res
    pts = sample_chart_points(mc, cfg.samples["curvature"], cfg.seed)
    reps = weyl_decomposition(mc, pts)
    S = np.array([abs(r.scalar) for r in reps])
    k = int(np.argmax(S))
    res.checks["scalar-flat"] = _le(S.max(), cfg.tolerances["tol_curv"], reps[k].point.as_array())
    v = self_duality(reps)
    res.checks["self-dual"] = Check(v.consistent, {"side": v.vanishing_side, "max_ratio": v.max_ratio}, 1e-5)
    return res


def conformal_error(m, mc, pts) -> float:
    """max(proportionality deviation, |factor - (z o Phi / z)^2|) for a lifted isometry."""
    r = verify_conformal(m, mc, pts)
    if r.resampled:
        raise RuntimeError("sample images hit the axis; choose another seed")
    expected = (m(pts)[:, 2] / pts[:, 2]) ** 2
    ferr = float(np.abs(r.factors - expected).max() / max(1.0, np.abs(expected).max()))
    return max(r.max_deviation, ferr)


def _symmetric_pair(mc) -> bool:
    return mc.toric and mc.n == 2


def suite_conformality(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("conformality")
    mc = cfg.monopoles()
    tol = cfg.tolerances["tol_conf"]
    if not mc.toric:
        for cid, _ in CATALOGUE["conformality"]:
            res.checks[cid] = _skip("needs monopoles on a common geodesic through the z-axis")
        return res
    pts = random_chart_points(cfg.samples["conformality"], cfg.seed)
    worst, wit = 0.0, None
    for k in (-1, 0, 1):
        e = conformal_error(lift_rotation(mc, k, 0.7), mc, pts)
        if e >= worst:
            worst, wit = e, f"k={k}"
    res.checks["rotations"] = _le(worst, tol, wit)
    worst, wit = 0.0, None
    for name, m in reflection_generators(mc).items():
        e = conformal_error(m, mc, pts)
        if e >= worst:
            worst, wit = e, name
    res.checks["reflections"] = _le(worst, tol, wit)
    if _symmetric_pair(mc):
        dev, inv, wit = 0.0, 0.0, None
        for th in (0.0, np.pi / 3):
            L = extra_involution(mc, th)
            d = verify_conformal(L, mc, pts).max_deviation
            q = image_distance((L @ L)(pts), pts)
            if d > 1e-6 or q > 1e-10:
                wit = wit or {"vartheta": th, "deviation": d, "square_defect": q}
            dev, inv = max(dev, d), max(inv, q)
        ok = dev < 1e-6 and inv < 1e-10
        res.checks["extra-involution"] = Check(ok, {"deviation": dev, "square_defect": inv}, 1e-6, wit)
    else:
        res.checks["extra-involution"] = _skip("defined for two monopoles only")
    return res


def suite_involution_group(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("involution-group")
    mc = cfg.monopoles()
    if not mc.toric:
        for cid, _ in CATALOGUE["involution-group"]:
            res.checks[cid] = _skip("needs monopoles on a common geodesic through the z-axis")
        return res
    pts = random_chart_points(12, cfg.seed)
    gens = reflection_generators(mc)
    sym = stabilizer_class(mc.points) is StabilizerClass.COLLINEAR_SYMMETRIC
    _, T = map_group(list(gens.values()), identity_map(mc), pts)
    name = groups.identify(T)
    expected = "Z2xZ2" if sym and mc.n >= 2 else "Z2"
    res.checks["reflection-group"] = Check(name == expected, name, None, {"expected": expected, "order": len(T)})
    if _symmetric_pair(mc):
        _, T = map_group([gens["Phi1"], gens["Phi3"], extra_involution(mc, 0.0)], identity_map(mc), pts)
        name = groups.identify(T)
        res.checks["full-group"] = Check(name == "D4", name, None, {"order": len(T)})
    else:
        res.checks["full-group"] = _skip("extra involution exists for two monopoles only")
    return res


def suite_twistor(cfg: RunConfig, exact: bool = False) -> SuiteResult:
    from . import twistor as tw

    res = SuiteResult("twistor-classification")
    m = tw.build_poon_model(cfg.lam)
    tol = cfg.tolerances["tol_span"]
    rng = np.random.default_rng(cfg.seed)
    # model and real structure
    pts = list(m.singular_points.values())
    node_res = max(float(m.residual(p)) for p in pts)
    ranks = [m.jacobian_rank(p) for p in pts]
    v = rng.normal(size=(20, 6)) + 1j * rng.normal(size=(20, 6))
    sig2 = float(np.abs(tw.real_structure(tw.real_structure(v)) - v).max())
    X = tw.sample_variety(m, 50, cfg.seed)
    sigX = float(m.residual(tw.real_structure(X)).max())
    ok = node_res < 1e-14 and ranks == [1] * 4 and sig2 < 1e-14 and sigX < 1e-10
    res.checks["model"] = Check(ok, {"node_residual": node_res, "ranks": ranks, "sigma2": sig2, "sigma_on_model": sigX})
    # torus
    ok = True
    for _ in range(10):
        s, t = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
        ok &= tw.commutes_with_sigma(tw.torus_action(s, t), tol) and tw.span_preserved(tw.torus_action(s, t), m, tol)
        ok &= not tw.commutes_with_sigma(tw.torus_action(s * 2, t), tol)
        ok &= tw.span_preserved(tw.torus_action(s * 2, t), m, tol)
    res.checks["torus"] = Check(bool(ok))
    # sweep
    sw = sweep_disagreements(m, cfg.samples["sweep"], cfg.seed, tol)
    res.checks["sweep"] = Check(sw["disagreements"] == 0, sw, None, sw.get("first"))
    # components
    bad = []
    for key in tw.all_component_keys():
        U = tw.component_representative(m, key, rng)
        if not (tw.span_preserved(U, m, tol) and tw.commutes_with_sigma(U, tol) and tw.maps_singular_set(U, m)):
            bad.append(list(key))
    res.checks["components"] = Check(not bad, 16 - len(bad), None, bad)
    # conics
    p0 = tw.conic_set_preserved(tw.U0, m, tol).perm
    pL = tw.conic_set_preserved(tw.lambda_matrix(m), m, tol).perm
    exp0 = {"tl1": "tl2", "tl2": "tl1", "tl3": "tl4", "tl4": "tl3"}
    okL = pL is not None and {pL["tl1"], pL["tl2"]} == {"tl3", "tl4"} and {pL["tl3"], pL["tl4"]} == {"tl1", "tl2"}
    res.checks["conics"] = Check(p0 == exp0 and okL, {"U0": p0, "Lambda": pL})
    # projections
    worst, ranks = 0.0, []
    for side in (1, 3):
        q = tw.image_quadric(side, m)
        P = tw.minitwistor_projection(side, X)
        P = P / np.linalg.norm(P, axis=-1, keepdims=True)
        worst = max(worst, float(np.abs(q(P)).max()))
        ranks.append(int(np.linalg.matrix_rank(q.M)))
    res.checks["projections"] = Check(worst < 1e-9 and ranks == [4, 4], {"residual": worst, "ranks": ranks}, 1e-9)
    if exact:
        import sympy as sp

        from . import exact as ex

        lam = sp.nsimplify(cfg.lam, rational=True)
        reps = ex.exact_component_representatives(lam)
        okc = all(ex.exact_span_preserved(U, lam) for U in reps.values())
        off = ex.exact_case_one(sp.Rational(1001, 1000), 1)
        res.checks["exact"] = Check(okc and not ex.exact_span_preserved(off, lam), str(lam))
    else:
        res.checks["exact"] = _skip("run with --exact-mode")
    return res


def sweep_disagreements(model, n: int, seed: int, tol: float = 1e-9, eps: float = 1e-3) -> dict:
    """Randomised on/off-constraint sweep for both cases against span_preserved."""
    from . import twistor as tw

    rng = np.random.default_rng(seed)
    kinds = ("diag", "offdiag")
    out = {"on": 0, "off": 0, "disagreements": 0}
    for case in ("I", "II"):
        for trial in range(2 * n):
            on = trial < n
            x, y = kinds[rng.integers(2)], kinds[rng.integers(2)]
            ph = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
            scale = np.ones(3)
            if not on:
                scale[rng.integers(3)] *= 1 + eps * rng.choice([-1, 1])
            if case == "I":
                mid = ("I", "J")[rng.integers(2)]
                U = tw.case_one(scale[0] * ph[0], scale[1] * ph[1], x, mid, y, c=scale[2])
            else:
                mid = ("-", "+")[rng.integers(2)]
                U = tw.case_two(model, model.beta * scale[0] * ph[0], model.alpha * scale[1] * ph[1], x, mid, y, 1j * scale[2])
            got = tw.span_preserved(U, model, tol)
            out["on" if on else "off"] += 1
            if got != on:
                out["disagreements"] += 1
                out.setdefault("first", {"case": case, "on_constraint": on, "scale": scale.tolist()})
    return out


def suite_resolution(cfg: RunConfig) -> SuiteResult:
    from . import resolution as rs
    from . import twistor as tw

    res = SuiteResult("resolution-lift")
    m = tw.build_poon_model(cfg.lam)
    got = {}
    ok = True
    for r in rs.ALL_RESOLUTIONS[:2]:
        keys = rs.lifting_keys(m, r, cfg.seed)
        got[r.label] = len(keys)
        ok &= keys == rs.PRINTED_LIFTING
    res.checks["census"] = Check(ok, got)
    q = rs.quotient_group(m, rs.SmallResolution("star", 1), cfg.seed)
    res.checks["quotient"] = Check(q.name == "D4" and q.subgroup_name == "Z2xZ2", {"group": q.name, "subgroup": q.subgroup_name})
    okp, oks = rs.ordering_check(m, "star_prime"), rs.ordering_check(m, "star")
    res.checks["ordering"] = Check(oks and not okp, {"star": oks, "star_prime": okp})
    g = rs.generators(m)
    res.checks["generators"] = _le(max(g.residuals.values()), 1e-12, g.residuals)
    bc = rs.bc_conjugation_check(m, cfg.seed)
    res.checks["torus-conjugation"] = Check(bc.ok, {"orbit_exchange": bc.orbit_exchange, "lambda_products": bc.lambda_products_ok})
    return res


def suite_einstein_weyl(cfg: RunConfig) -> SuiteResult:
    from . import twistor as tw

    res = SuiteResult("einstein-weyl")
    m = tw.build_poon_model(cfg.lam)
    rng = np.random.default_rng(cfg.seed)
    n = cfg.samples["ew"]
    dis, first = 0, None
    for i in range(n):
        side = 1 if i % 2 == 0 else 3
        branch = "disc" if side == 3 and i % 4 == 3 else "plane"
        scale = 1 / m.alpha if side == 1 else 2 / m.beta
        b = rng.uniform(-1.5, 1.5) * scale
        c = complex(*rng.normal(size=2)) * scale / 2
        adm = tw.ew_admissible(side, b, c, m, branch)
        rp = tw.real_point_test(tw.EWPoint(side, b, c, branch), m)
        if adm == rp.has_real_point:
            dis += 1
            first = first or {"side": side, "b": b, "c": c, "branch": branch}
    res.checks["regions"] = Check(dis == 0, {"samples": n, "disagreements": dis}, None, first)
    ok = True
    for _ in range(20):
        b, c = rng.normal(), complex(*rng.normal(size=2))
        ph = tw.ew_involutions(b, c)
        for k in ph:
            ok &= tw.ew_involutions(*ph[k])[k] == (b, c)
        ok &= tw.ew_involutions(*ph["phi3"])["phi2"] == ph["phi1"]
    p, q = tw.ew_monopole_images(m)
    ok &= tw.ew_involutions(p.b, p.c)["phi3"] == (p.b, p.c)
    ok &= tw.ew_involutions(p.b, p.c)["phi1"] == (q.b, q.c)
    res.checks["involutions"] = Check(bool(ok))
    ok = True
    for _ in range(200):
        b3 = rng.uniform(-3, 3) / m.beta
        c3 = complex(*rng.normal(size=2)) / 2
        if tw.ew_admissible(3, b3, c3, m):
            ok &= tw.ew_admissible(1, *tw.lambda_dual_action(b3, c3, m), m)
    res.checks["dual-action"] = Check(bool(ok))
    sh = tw.angular_shift_check(m, seed=cfg.seed)
    const_ok = abs(sh.constant - 1.5 * np.pi) < 1e-12 and sh.max_spread < 1e-12
    mc = cfg.monopoles()
    if _symmetric_pair(mc):
        pts = random_chart_points(50, cfg.seed)
        img = extra_involution(mc, np.pi / 2)(pts)
        t3, t1 = sh.induced(pts[:, 1], pts[:, 3])
        d = max(np.abs(np.angle(np.exp(1j * (img[:, 1] - t3)))).max(), np.abs(np.angle(np.exp(1j * (img[:, 3] - t1)))).max())
        res.checks["angular-shift"] = Check(const_ok and d < 1e-12, {"constant": sh.constant, "map_defect": float(d)})
    else:
        res.checks["angular-shift"] = Check(const_ok, {"constant": sh.constant}, None, None, None)
    return res


SUITES = {
    "connection-identity": suite_connection_identity,
    "curvature": suite_curvature,
    "conformality": suite_conformality,
    "involution-group": suite_involution_group,
    "twistor-classification": suite_twistor,
    "resolution-lift": suite_resolution,
    "einstein-weyl": suite_einstein_weyl,
}


def run(cfg: RunConfig, exact: bool = False) -> list[SuiteResult]:
    out = []
    for name in cfg.suites:
        t0 = time.perf_counter()
        r = SUITES[name](cfg, exact) if name == "twistor-classification" else SUITES[name](cfg)
        r.wall_time = time.perf_counter() - t0
        out.append(r)
    return out
