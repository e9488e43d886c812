"""Exact span tests over Q(i, alpha, beta) with sympy.

Used for lambda with rational alpha^2 = 4 - 2 lam and beta^2 = 2 lam - 2 and
for unit complex parameters with rational real and imaginary parts, so every
entry is an algebraic number sympy can decide zero-equivalence for.
"""
from __future__ import annotations

from itertools import combinations_with_replacement

import sympy as sp

PYTHAGOREAN = (sp.Rational(3, 5) + sp.Rational(4, 5) * sp.I, sp.Rational(5, 13) + sp.Rational(12, 13) * sp.I)


def _lam(lam) -> sp.Rational:
    lam = sp.nsimplify(lam, rational=True)
    if not sp.Rational(3, 2) < lam < 2:
        raise ValueError("lambda must lie in (3/2, 2)")
    return lam


def exact_forms(lam):
    lam = _lam(lam)
    w0, w1, z2, z3, w4, w5 = sp.symbols("w0 w1 z2 z3 w4 w5")
    v = sp.Matrix([w0, w1, z2, z3, w4, w5])
    h0 = 2 * w0 * w1 + lam * z2**2 + sp.Rational(3, 2) * z3**2 + w4 * w5
    hinf = w0 * w1 + z2**2 + z3**2 + w4 * w5
    return v, h0, hinf


def alpha_beta(lam):
    lam = _lam(lam)
    return sp.sqrt(4 - 2 * lam), sp.sqrt(2 * lam - 2)


def _coeffs(expr, v):
    poly = sp.Poly(sp.expand(expr), *v)
    out = []
    for i, j in combinations_with_replacement(range(6), 2):
        mono = [0] * 6
        mono[i] += 1
        mono[j] += 1
        out.append(poly.coeff_monomial(tuple(mono)))
    return out


def exact_span_preserved(U, lam) -> bool:
    """Rank of the stacked 4x21 coefficient matrix equals 2, decided exactly."""
    if not isinstance(U, sp.MatrixBase):
        raise TypeError("exact mode needs a sympy Matrix")
    v, h0, hinf = exact_forms(lam)
    w = U * v
    sub = dict(zip(v, w))
    rows = [_coeffs(h, v) for h in (h0, hinf)]
    rows += [_coeffs(h.xreplace(sub), v) for h in (h0, hinf)]
    return sp.Matrix(rows).rank(simplify=True) == 2


def _block(kind, a, sign):
    if kind == "diag":
        return sp.Matrix([[a, 0], [0, sign * sp.conjugate(a)]])
    return sp.Matrix([[0, a], [sign * sp.conjugate(a), 0]])


def exact_case_one(a, b, A11="diag", A22="I", A33="diag", c=1) -> sp.Matrix:
    U = sp.zeros(6, 6)
    U[0:2, 0:2] = _block(A11, a, 1)
    U[2:4, 2:4] = c * (sp.eye(2) if A22 == "I" else sp.diag(1, -1))
    U[4:6, 4:6] = _block(A33, b, 1)
    return U


def exact_case_two(lam, a, b, A13="diag", A22="-", A31="diag", c=sp.I) -> sp.Matrix:
    al, be = alpha_beta(lam)
    sgn = 1 if A22 == "+" else -1
    U = sp.zeros(6, 6)
    U[0:2, 4:6] = _block(A13, a, -1)
    U[2:4, 2:4] = c * sp.Matrix([[0, sgn], [al * be, 0]])
    U[4:6, 0:2] = _block(A31, b, -1)
    return U


def exact_component_representatives(lam):
    """One exact matrix per block pattern (16 total), on the constraint surface."""
    al, be = alpha_beta(lam)
    p, q = PYTHAGOREAN
    out = {}
    kinds = ("diag", "offdiag")
    for x in kinds:
        for m in ("I", "J"):
            for y in kinds:
                out[("I", x, m, y)] = exact_case_one(p, q, x, m, y)
    for x in kinds:
        for m in ("-", "+"):
            for y in kinds:
                out[("II", x, m, y)] = exact_case_two(lam, be * p, al * q, x, m, y)
    return out
