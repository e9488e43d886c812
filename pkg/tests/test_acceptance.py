"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL  <title>  <measurements>``
line; the lines are repeated in the terminal summary.
"""
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from sdmono import groups
from sdmono import resolution as rs
from sdmono import twistor as tw
from sdmono.curvature import curvature, euclidean_metric, round_sphere_metric
from sdmono.lift import (
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
from sdmono.metric import sample_chart_points, self_duality, weyl_decomposition
from sdmono.monopole import MonopoleConfig, halton_rz, transition, verify_curvature_identity
from sdmono.suites import conformal_error, sweep_disagreements

PAIR = MonopoleConfig.from_heights([1.0, 2.0])
CONFIGS = {1: [1.0], 2: [1.0, 2.0], 3: [1.0, 2.0, 8.0]}
LAMBDAS = [1.6, 1.75, 1.9]


def criterion(n, title):
    def wrap(fn):
        def run():
            info = {}
            ok = False
            try:
                fn(info)
                ok = True
            finally:
                detail = "  ".join(f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}" for k, v in info.items())
                line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  {detail}".rstrip()
                print(line)
                ACCEPTANCE_LINES.append(line)

        run.__name__ = fn.__name__
        return run

    return wrap


@criterion(1, "connection identity")
def test_01_connection_identity(info):
    t0 = time.perf_counter()
    dual = fd = 0.0
    for hs in CONFIGS.values():
        rep = verify_curvature_identity(MonopoleConfig.from_heights(hs), halton_rz(1000, 0))
        assert rep.n_samples == 1000
        dual, fd = max(dual, rep.residual_dual), max(fd, rep.residual_fd)
    info.update(dual=dual, fd=fd, seconds=time.perf_counter() - t0)
    assert dual < 1e-9 and fd < 1e-4 and info["seconds"] < 5


@criterion(2, "axis table for two monopoles")
def test_02_axis_table(info):
    c1, c2 = PAIR.heights
    z = np.concatenate([np.linspace(0.01, c1 - 0.01, 34), np.linspace(c1 + 0.01, c2 - 0.01, 33), np.linspace(c2 + 0.01, 10, 33)])
    expected = np.where(z < c1, 1.0, np.where(z < c2, 0.0, -1.0))
    err = float(np.abs(PAIR.f(np.zeros_like(z), z) - expected).max())
    info.update(points=len(z), max_error=err)
    assert len(z) == 100 and err < 1e-12


@criterion(3, "transition cocycle and fixed intervals")
def test_03_transition(info):
    th = np.linspace(0, 2 * np.pi, 97)
    cocycle = float(np.abs(np.exp(1j * transition(1, 2, th)) * np.exp(1j * transition(2, 1, th)) - 1).max())
    g21 = float(np.abs(np.exp(1j * transition(1, 2, th)) - np.exp(1j * th)).max())
    pattern = {k: fixed_axis_intervals(PAIR, k) for k in (-1, 0, 1)}
    info.update(cocycle=cocycle, g21=g21, fixed=pattern)
    assert cocycle < 1e-15 and g21 < 1e-15
    assert pattern == {-1: [3], 0: [2], 1: [1]}


@criterion(4, "scalar flatness and engine sanity")
def test_04_scalar_flat(info):
    t0 = time.perf_counter()
    S = 0.0
    for n, hs in CONFIGS.items():
        mc = MonopoleConfig.from_heights(hs)
        reps = weyl_decomposition(mc, sample_chart_points(mc, 100, n))
        assert len(reps) == 100
        S = max(S, max(abs(r.scalar) for r in reps))
    x = np.random.default_rng(0).uniform(0.3, 1.2, (20, 4))
    flat = float(np.abs(curvature(euclidean_metric, x).scalar).max())
    sph = curvature(round_sphere_metric, x)
    weyl = float(max(sph.weyl_plus_norm.max(), sph.weyl_minus_norm.max()))
    info.update(max_S=S, flat_S=flat, sphere_weyl=weyl, seconds=time.perf_counter() - t0)
    assert S < 1e-7 and flat == 0 and weyl < 1e-10 and info["seconds"] < 60


@criterion(5, "self-duality")
def test_05_self_duality(info):
    sides, ratio = [], 0.0
    for n in (2, 3):
        mc = MonopoleConfig.from_heights(CONFIGS[n])
        v = self_duality(weyl_decomposition(mc, sample_chart_points(mc, 50, 10 + n)))
        assert v.consistent
        sides.append(v.vanishing_side)
        ratio = max(ratio, v.max_ratio)
    info.update(sides=sides, max_ratio=ratio)
    assert ratio < 1e-5 and len(set(sides)) == 1


@criterion(6, "lift conformality")
def test_06_lift_conformality(info):
    pts = random_chart_points(200, 6)
    maps = {f"rot(k={k})": lift_rotation(PAIR, k, 0.7) for k in (-1, 0, 1)}
    maps.update(reflection_generators(PAIR))
    assert {"Phi1", "Phi2", "Phi3"} <= set(maps)
    errs = {name: conformal_error(m, PAIR, pts) for name, m in maps.items()}
    info.update(max_error=max(errs.values()), worst=max(errs, key=errs.get))
    assert max(errs.values()) < 1e-8


@criterion(7, "extra involution")
def test_07_extra_involution(info):
    pts = random_chart_points(200, 7)
    dev = sq = 0.0
    for th in (0.0, np.pi / 3):
        L = extra_involution(PAIR, th)
        r = verify_conformal(L, PAIR, pts)
        assert r.n_points == 200
        dev = max(dev, r.max_deviation)
        sq = max(sq, image_distance((L @ L)(pts), pts))
    info.update(deviation=dev, square_defect=sq)
    assert dev < 1e-6 and sq < 1e-10


@criterion(8, "group structure")
def test_08_groups(info):
    pts = random_chart_points(12, 8)
    g = reflection_generators(PAIR)
    _, T4 = map_group([g["Phi1"], g["Phi2"], g["Phi3"]], identity_map(PAIR), pts)
    _, T8 = map_group([g["Phi1"], g["Phi3"], extra_involution(PAIR, 0.0)], identity_map(PAIR), pts)
    asym = MonopoleConfig.from_heights(CONFIGS[3])
    _, T2 = map_group(list(reflection_generators(asym).values()), identity_map(asym), pts)
    names = (groups.identify(T4), groups.identify(T8), groups.identify(T2))
    info.update(reflections=names[0], full=names[1], asymmetric=names[2])
    assert names == ("Z2xZ2", "D4", "Z2")


@criterion(9, "automorphism classification sweep")
def test_09_sweep(info):
    dis, on, off = 0, 0, 0
    for lam in LAMBDAS:
        out = sweep_disagreements(tw.build_poon_model(lam), 200, 9)
        dis += out["disagreements"]
        on += out["on"]
        off += out["off"]
    info.update(on=on, off=off, disagreements=dis)
    assert on == off == 2 * 200 * len(LAMBDAS) and dis == 0


@criterion(10, "lifting census")
def test_10_census(info):
    m = tw.build_poon_model(1.75)
    counts = {}
    for res in rs.ALL_RESOLUTIONS[:2]:
        keys = rs.lifting_keys(m, res, 10)
        counts[res.label] = len(keys)
        assert keys == rs.PRINTED_LIFTING
    q = rs.quotient_group(m, rs.SmallResolution("star", 1), 10)
    resid = max(rs.generators(m).residuals.values())
    info.update(lifting=counts, quotient=q.name, generator_residual=resid)
    assert set(counts.values()) == {8} and q.name == "D4" and resid < 1e-12


@criterion(11, "resolution exclusion")
def test_11_ordering(info):
    verdicts = {lam: (rs.ordering_check(tw.build_poon_model(lam), "star"), rs.ordering_check(tw.build_poon_model(lam), "star_prime")) for lam in LAMBDAS}
    info.update(star_ok=all(v[0] for v in verdicts.values()), star_prime_rejected=all(not v[1] for v in verdicts.values()))
    assert info["star_ok"] and info["star_prime_rejected"]


@criterion(12, "Einstein-Weyl layer")
def test_12_einstein_weyl(info):
    m = tw.build_poon_model(1.75)
    rng = np.random.default_rng(12)
    dis = 0
    for i in range(1000):
        side = 1 if i % 2 == 0 else 3
        branch = "disc" if side == 3 and i % 4 == 3 else "plane"
        scale = 1 / m.alpha if side == 1 else 2 / m.beta
        b, c = rng.uniform(-1.5, 1.5) * scale, complex(*rng.normal(size=2)) * scale / 2
        dis += tw.ew_admissible(side, b, c, m, branch) == tw.real_point_test(tw.EWPoint(side, b, c, branch), m).has_real_point
    ok = True
    for _ in range(50):
        b, c = rng.normal(), complex(*rng.normal(size=2))
        ph = tw.ew_involutions(b, c)
        ok &= all(tw.ew_involutions(*ph[k])[k] == (b, c) for k in ph)
        ok &= tw.ew_involutions(*ph["phi3"])["phi2"] == ph["phi1"]
    p, q = tw.ew_monopole_images(m)
    ok &= tw.ew_involutions(p.b, p.c)["phi3"] == (p.b, p.c) and tw.ew_involutions(p.b, p.c)["phi1"] == (q.b, q.c)
    sh = tw.angular_shift_check(m)
    pts = random_chart_points(100, 12)
    img = extra_involution(PAIR, np.pi / 2)(pts)
    t3, t1 = sh.induced(pts[:, 1], pts[:, 3])
    defect = float(max(np.abs(np.angle(np.exp(1j * (img[:, 1] - t3)))).max(), np.abs(np.angle(np.exp(1j * (img[:, 3] - t1)))).max()))
    info.update(region_disagreements=dis, relations=bool(ok), shift_constant=sh.constant / np.pi, map_defect=defect)
    assert dis == 0 and ok
    assert abs(sh.constant - 1.5 * np.pi) < 1e-12 and sh.max_spread < 1e-12 and defect < 1e-12


@criterion(13, "semi-free census")
def test_13_semifree(info):
    counts = {n: len(tw.semifree_circle_subgroups(n)) for n in range(2, 7)}
    info.update(counts=counts)
    assert counts == {2: 2, 3: 1, 4: 1, 5: 1, 6: 1}
