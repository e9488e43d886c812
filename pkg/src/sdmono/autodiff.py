"""Forward-mode automatic differentiation on numpy arrays.

Two jet types are provided:

* :class:`Dual` carries a value and its gradient with respect to ``m`` seed
  directions.  It is used for Jacobians of maps and for the first derivatives
  in the connection identity.
* :class:`HyperDual` additionally carries the full Hessian.  Seeding all ``m``
  coordinates at once is equivalent to evaluating every hyper-dual pair
  ``(e_i, e_j)`` and is what the curvature engine consumes.

Both types are vectorised: ``val`` has an arbitrary shape ``S``, the gradient
has shape ``S + (m,)`` and the Hessian ``S + (m, m)``.  The module level
functions (:func:`sqrt`, :func:`atan2`, ...) dispatch on the argument type so
the same geometric code runs on floats, arrays, and jets.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "Dual",
    "HyperDual",
    "seed_dual",
    "seed_hyperdual",
    "value",
    "sqrt",
    "exp",
    "log",
    "sin",
    "cos",
    "arctan",
    "atan2",
    "arccosh",
    "where",
    "stack",
    "jacobian",
]


class _Jet:
    __array_priority__ = 1000
    __slots__ = ()

    # subclasses implement: _const_like, _unary, _mul_jet, val

    def _coerce(self, other):
        if isinstance(other, _Jet):
            if type(other) is not type(self):
                raise TypeError("cannot mix Dual and HyperDual")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return self._shift(other)
        return self._add_jet(o)

    __radd__ = __add__

    def __neg__(self):
        return self._scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self._scale(other)
        return self._mul_jet(o)

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.val
        return self._unary(1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return self._scale(1.0 / np.asarray(other, dtype=float))
        return self._mul_jet(o.reciprocal())

    def __rtruediv__(self, other):
        return self.reciprocal()._scale(other)

    def __pow__(self, p):
        if isinstance(p, _Jet):
            return exp(log(self) * p)
        p = float(p)
        v = self.val
        if p == 2.0:
            return self._mul_jet(self)
        return self._unary(v**p, p * v ** (p - 1.0), p * (p - 1.0) * v ** (p - 2.0))

    # comparisons act on the value part (used for branch selection only)
    def __lt__(self, other):
        return self.val < value(other)

    def __gt__(self, other):
        return self.val > value(other)

    def __le__(self, other):
        return self.val <= value(other)

    def __ge__(self, other):
        return self.val >= value(other)

    @property
    def shape(self):
        return np.shape(self.val)


class Dual(_Jet):
    """Value plus gradient: ``val + sum_k eps[..., k] e_k``."""

    __slots__ = ("val", "eps")

    def __init__(self, val, eps):
        self.val = np.asarray(val, dtype=float)
        self.eps = np.asarray(eps, dtype=float)

    @property
    def m(self):
        return self.eps.shape[-1]

    def _shift(self, c):
        v = self.val + c
        return Dual(v, np.broadcast_to(self.eps, np.shape(v) + (self.m,)))

    def _scale(self, c):
        c = np.asarray(c, dtype=float)
        return Dual(self.val * c, self.eps * c[..., None])

    def _add_jet(self, o):
        return Dual(self.val + o.val, self.eps + o.eps)

    def _mul_jet(self, o):
        return Dual(
            self.val * o.val,
            self.eps * o.val[..., None] + o.eps * self.val[..., None],
        )

    def _unary(self, f0, f1, f2=None):
        f1 = np.asarray(f1, dtype=float)
        return Dual(f0, self.eps * f1[..., None])

    def __repr__(self):
        return f"Dual(val={self.val!r}, eps={self.eps!r})"


class HyperDual(_Jet):
    """Second-order jet: value, gradient ``d1`` and Hessian ``d2``."""

    __slots__ = ("val", "d1", "d2")

    def __init__(self, val, d1, d2):
        self.val = np.asarray(val, dtype=float)
        self.d1 = np.asarray(d1, dtype=float)
        self.d2 = np.asarray(d2, dtype=float)

    @property
    def m(self):
        return self.d1.shape[-1]

    def _shift(self, c):
        v = self.val + c
        s = np.shape(v)
        return HyperDual(
            v,
            np.broadcast_to(self.d1, s + (self.m,)),
            np.broadcast_to(self.d2, s + (self.m, self.m)),
        )

    def _scale(self, c):
        c = np.asarray(c, dtype=float)
        return HyperDual(self.val * c, self.d1 * c[..., None], self.d2 * c[..., None, None])

    def _add_jet(self, o):
        return HyperDual(self.val + o.val, self.d1 + o.d1, self.d2 + o.d2)

    def _mul_jet(self, o):
        a, b = self.val, o.val
        cross = self.d1[..., :, None] * o.d1[..., None, :]
        return HyperDual(
            a * b,
            self.d1 * b[..., None] + o.d1 * a[..., None],
            self.d2 * b[..., None, None] + o.d2 * a[..., None, None] + cross + np.swapaxes(cross, -1, -2),
        )

    def _unary(self, f0, f1, f2):
        f1 = np.asarray(f1, dtype=float)
        f2 = np.asarray(f2, dtype=float)
        outer = self.d1[..., :, None] * self.d1[..., None, :]
        return HyperDual(
            f0,
            self.d1 * f1[..., None],
            self.d2 * f1[..., None, None] + outer * f2[..., None, None],
        )

    def __repr__(self):
        return f"HyperDual(val={self.val!r}, d1={self.d1!r}, d2={self.d2!r})"


def seed_dual(x):
    """Seed the last axis of ``x`` (shape ``S + (m,)``) as independent variables.

    Returns a list of ``m`` :class:`Dual` objects with value shape ``S``.
    """
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    eye = np.eye(m)
    return [Dual(x[..., k], np.broadcast_to(eye[k], x.shape[:-1] + (m,))) for k in range(m)]


def seed_hyperdual(x):
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    eye = np.eye(m)
    zero = np.zeros(x.shape[:-1] + (m, m))
    return [HyperDual(x[..., k], np.broadcast_to(eye[k], x.shape[:-1] + (m,)), zero) for k in range(m)]


def value(x):
    return x.val if isinstance(x, _Jet) else x


def sqrt(x):
    if isinstance(x, _Jet):
        s = np.sqrt(x.val)
        return x._unary(s, 0.5 / s, -0.25 / (s * x.val))
    return np.sqrt(x)


def exp(x):
    if isinstance(x, _Jet):
        e = np.exp(x.val)
        return x._unary(e, e, e)
    return np.exp(x)


def log(x):
    if isinstance(x, _Jet):
        v = x.val
        return x._unary(np.log(v), 1.0 / v, -1.0 / v**2)
    return np.log(x)


def sin(x):
    if isinstance(x, _Jet):
        s, c = np.sin(x.val), np.cos(x.val)
        return x._unary(s, c, -s)
    return np.sin(x)


def cos(x):
    if isinstance(x, _Jet):
        s, c = np.sin(x.val), np.cos(x.val)
        return x._unary(c, -s, -c)
    return np.cos(x)


def arctan(x):
    if isinstance(x, _Jet):
        v = x.val
        d = 1.0 / (1.0 + v * v)
        return x._unary(np.arctan(v), d, -2.0 * v * d * d)
    return np.arctan(x)


def arccosh(x):
    if isinstance(x, _Jet):
        v = x.val
        q = np.sqrt(v * v - 1.0)
        return x._unary(np.arccosh(v), 1.0 / q, -v / q**3)
    return np.arccosh(x)


def where(cond, a, b):
    """Elementwise select between two jets (or a jet and a constant)."""
    if not isinstance(a, _Jet) and not isinstance(b, _Jet):
        return np.where(cond, a, b)
    proto = a if isinstance(a, _Jet) else b
    a = a if isinstance(a, _Jet) else proto * 0.0 + a
    b = b if isinstance(b, _Jet) else proto * 0.0 + b
    c = np.asarray(cond)
    if isinstance(proto, Dual):
        return Dual(np.where(c, a.val, b.val), np.where(c[..., None], a.eps, b.eps))
    return HyperDual(
        np.where(c, a.val, b.val),
        np.where(c[..., None], a.d1, b.d1),
        np.where(c[..., None, None], a.d2, b.d2),
    )


def atan2(y, x):
    """Two-argument arctangent with exact derivatives on both branches."""
    if not isinstance(y, _Jet) and not isinstance(x, _Jet):
        return np.arctan2(y, x)
    yv, xv = np.asarray(value(y), dtype=float), np.asarray(value(x), dtype=float)
    use_x = np.abs(xv) >= np.abs(yv)
    one = np.ones_like(xv)
    safe_x = x + np.where(use_x, 0.0, one)  # avoid 0/0 in the unused branch
    safe_y = y + np.where(use_x, one, 0.0)
    t = where(use_x, arctan(y / safe_x), -arctan(x / safe_y))
    exact = np.arctan2(yv, xv)
    return t + (exact - t.val)


def stack(items, axis=-1):
    """Stack jets/constants along a new value axis (negative index only)."""
    if axis >= 0:
        raise ValueError("stack axis must be negative")
    proto = next((it for it in items if isinstance(it, _Jet)), None)
    if proto is None:
        return np.stack([np.asarray(it, dtype=float) for it in items], axis=axis)
    shape = np.broadcast_shapes(*[np.shape(value(it)) for it in items])
    jets = [it if isinstance(it, _Jet) else proto * 0.0 + np.broadcast_to(it, shape) for it in items]
    jets = [j._shift(np.zeros(shape)) for j in jets]
    if isinstance(proto, Dual):
        return Dual(
            np.stack([j.val for j in jets], axis=axis),
            np.stack([j.eps for j in jets], axis=axis - 1),
        )
    return HyperDual(
        np.stack([j.val for j in jets], axis=axis),
        np.stack([j.d1 for j in jets], axis=axis - 1),
        np.stack([j.d2 for j in jets], axis=axis - 2),
    )


def jacobian(fn, x):
    """Jacobian of ``fn`` (list of outputs) at points ``x`` of shape ``(N, m)``.

    Returns ``(values, J)`` with ``values`` shape ``(N, k)`` and ``J`` shape
    ``(N, k, m)``.
    """
    out = fn(seed_dual(x))
    vals = np.stack([np.broadcast_to(value(o), np.shape(x)[:-1]) for o in out], axis=-1)
    rows = []
    for o in out:
        if isinstance(o, Dual):
            rows.append(np.broadcast_to(o.eps, np.shape(x)))
        else:
            rows.append(np.zeros(np.shape(x)))
    return vals, np.stack(rows, axis=-2)
