"""Small resolutions, the lifting census and the boundary-order exclusion."""
import itertools

import numpy as np
import pytest

from sdmono import resolution as rs
from sdmono import twistor as tw

LAMBDAS = [1.6, 1.75, 1.9]


@pytest.mark.parametrize("lam", LAMBDAS)
def test_census(lam):
    m = tw.build_poon_model(lam)
    for res in rs.ALL_RESOLUTIONS[:2]:
        assert rs.lifting_keys(m, res, 0) == rs.PRINTED_LIFTING
    assert len(rs.PRINTED_LIFTING) == 8


def test_quotient(poon):
    q = rs.quotient_group(poon, rs.SmallResolution("star", 1), 0)
    assert q.name == "D4" and q.subgroup_name == "Z2xZ2"


def test_generators(poon):
    g = rs.generators(poon)
    assert max(g.residuals.values()) < 1e-12


def test_cyclic_rule():
    a, b = 1.0, 2.0
    assert rs.cyclic_realizable((-a, -b, b, a))
    assert rs.cyclic_realizable((-b, -a, a, b))
    assert not rs.cyclic_realizable((-a, b, -b, a))
    vals = (-b, -a, a, b)
    for perm in itertools.permutations(vals):
        rotations = {tuple(np.roll(perm, k)) for k in range(4)}
        expected = vals in rotations or vals[::-1] in rotations
        assert rs.cyclic_realizable(perm) == expected


@pytest.mark.parametrize("lam", LAMBDAS)
def test_ordering(lam):
    m = tw.build_poon_model(lam)
    assert rs.ordering_check(m, "star")
    assert not rs.ordering_check(m, "star_prime")


def test_bc_conjugation(poon):
    assert rs.bc_conjugation_check(poon, 0).ok


def test_real_compatibility(poon):
    assert all(rs.real_compatible(r, poon) for r in rs.ALL_RESOLUTIONS[:2])
