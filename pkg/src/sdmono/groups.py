"""Finite groups from multiplication tables.

A table is an ``(n, n)`` integer array with ``T[i, j] = index of e_i * e_j``.
Identification is a brute-force isomorphism search against a small
catalogue, pruned by element orders; order 8 needs at most 7! candidates.
"""
from __future__ import annotations

from itertools import permutations
from typing import Callable, Sequence

import numpy as np


def _cyclic(n: int) -> np.ndarray:
    i = np.arange(n)
    return (i[:, None] + i[None, :]) % n


def _klein() -> np.ndarray:
    i = np.arange(4)
    return i[:, None] ^ i[None, :]


def _dihedral4() -> np.ndarray:
    # elements r^a s^b encoded as a + 4b; s r s = r^{-1}
    T = np.zeros((8, 8), dtype=int)
    for x in range(8):
        for y in range(8):
            a1, b1 = x % 4, x // 4
            a2, b2 = y % 4, y // 4
            a = (a1 + (a2 if b1 == 0 else -a2)) % 4
            T[x, y] = a + 4 * ((b1 + b2) % 2)
    return T


def _quaternion() -> np.ndarray:
    # unit quaternions {+-1, +-i, +-j, +-k}: index = 2*basis + sign_bit
    mult = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    T = np.zeros((8, 8), dtype=int)
    for x in range(8):
        for y in range(8):
            b, s = mult[(x // 2, y // 2)]
            sign = (-1) ** (x % 2) * (-1) ** (y % 2) * s
            T[x, y] = 2 * b + (0 if sign > 0 else 1)
    return T


CATALOGUE: dict[str, np.ndarray] = {
    "Z2": _cyclic(2),
    "Z2xZ2": _klein(),
    "Z4": _cyclic(4),
    "D4": _dihedral4(),
    "Q8": _quaternion(),
}


def is_group_table(T: np.ndarray) -> bool:
    T = np.asarray(T)
    n = len(T)
    if T.shape != (n, n):
        return False
    rng = set(range(n))
    if any(set(row) != rng for row in T) or any(set(col) != rng for col in T.T):
        return False
    return all(T[T[a, b], c] == T[a, T[b, c]] for a in range(n) for b in range(n) for c in range(n))


def identity_index(T: np.ndarray) -> int:
    n = len(T)
    for e in range(n):
        if np.all(T[e] == np.arange(n)) and np.all(T[:, e] == np.arange(n)):
            return e
    raise ValueError("table has no identity element")


def element_orders(T: np.ndarray) -> list[int]:
    e = identity_index(T)
    out = []
    for x in range(len(T)):
        k, y = 1, x
        while y != e:
            y, k = T[y, x], k + 1
        out.append(k)
    return out


def isomorphic(A: np.ndarray, B: np.ndarray) -> bool:
    A, B = np.asarray(A), np.asarray(B)
    n = len(A)
    if len(B) != n:
        return False
    oa, ob = element_orders(A), element_orders(B)
    if sorted(oa) != sorted(ob):
        return False
    ea, eb = identity_index(A), identity_index(B)
    rest_a = [x for x in range(n) if x != ea]
    rest_b = [x for x in range(n) if x != eb]
    for perm in permutations(rest_b):
        f = {ea: eb, **dict(zip(rest_a, perm))}
        if any(oa[x] != ob[f[x]] for x in rest_a):
            continue
        if all(f[A[x, y]] == B[f[x], f[y]] for x in range(n) for y in range(n)):
            return True
    return False


def identify(T: np.ndarray) -> str | None:
    """Name of the catalogued group isomorphic to ``T``, or None."""
    for name, C in CATALOGUE.items():
        if isomorphic(T, C):
            return name
    return None


def is_abelian(T: np.ndarray) -> bool:
    T = np.asarray(T)
    return bool(np.all(T == T.T))


def closure_table(
    generators: Sequence,
    compose: Callable,
    equal: Callable,
    identity,
    signature: Callable | None = None,
    max_order: int = 64,
) -> tuple[list, np.ndarray]:
    """Close a generating set under ``compose`` and return (elements, table).

    ``signature(x)`` (default: ``x`` itself) is computed once per candidate and
    ``equal`` compares signatures, e.g. images of a fixed sample set.
    """
    sig = signature or (lambda x: x)
    elems, sigs = [identity], [sig(identity)]

    def find(s):
        for i, t in enumerate(sigs):
            if equal(s, t):
                return i
        return -1

    frontier = list(generators)
    while frontier:
        x = frontier.pop()
        sx = sig(x)
        if find(sx) < 0:
            elems.append(x)
            sigs.append(sx)
            if len(elems) > max_order:
                raise ValueError("generated group exceeds max_order")
            frontier.extend(compose(x, g) for g in generators)
            frontier.extend(compose(g, x) for g in generators)
    n = len(elems)
    T = np.zeros((n, n), dtype=int)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            s_ab = sig(compose(a, b))
            hits = [k for k, t in enumerate(sigs) if equal(s_ab, t)]
            if len(hits) != 1:
                raise ValueError("set is not closed under composition (or equality is ambiguous)")
            T[i, j] = hits[0]
    return elems, T
