"""Truncated bivariate Taylor jets.

A jet stores the Taylor coefficients ``c[i][j] = d^(i+j) f / dx^i dy^j / (i! j!)``
of a scalar function at an expansion point, for all ``i + j <= ORDER``.
Coefficients live in a numpy array of shape ``(ncoeff, *batch)`` so that one
jet can carry a whole sweep of expansion points at once; a scalar jet is the
``batch == ()`` special case.

Coefficients are ordered by total degree, then by descending ``i``::

    (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import DivisionByZeroJet, DomainError

RECIPROCAL_EPS = 1e-300


def _index_tables(order: int):
    index = [(i, d - i) for d in range(order + 1) for i in range(d, -1, -1)]
    pos = {ij: k for k, ij in enumerate(index)}
    ia, ib, starts = [], [], []
    for i, j in index:
        starts.append(len(ia))
        for p in range(i + 1):
            for q in range(j + 1):
                ia.append(pos[p, q])
                ib.append(pos[i - p, j - q])
    return (tuple(index), pos, np.array(ia), np.array(ib), np.array(starts))


class _Jet:
    ORDER: int
    INDEX: tuple
    POS: dict
    _IA: np.ndarray
    _IB: np.ndarray
    _STARTS: np.ndarray

    __slots__ = ("c",)
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init_subclass__(cls, order: int, **kw):
        super().__init_subclass__(**kw)
        cls.ORDER = order
        cls.INDEX, cls.POS, cls._IA, cls._IB, cls._STARTS = _index_tables(order)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim == 0 or c.shape[0] != len(self.INDEX):
            raise ValueError(f"{type(self).__name__} needs {len(self.INDEX)} coefficients")
        c.flags.writeable = False
        self.c = c

    @classmethod
    def _wrap(cls, c: np.ndarray):
        obj = cls.__new__(cls)
        c.flags.writeable = False
        obj.c = c
        return obj

    # construction
    @classmethod
    def var(cls, index: int, value):
        if index not in (1, 2):
            raise ValueError("jet variable index must be 1 or 2")
        value = np.asarray(value, dtype=float)
        c = np.zeros((len(cls.INDEX),) + value.shape)
        c[0] = value
        c[1 if index == 1 else 2] = 1.0
        return cls._wrap(c)

    @classmethod
    def const(cls, value):
        value = np.asarray(value, dtype=float)
        c = np.zeros((len(cls.INDEX),) + value.shape)
        c[0] = value
        return cls._wrap(c)

    @classmethod
    def from_dict(cls, coeffs: dict, batch_shape=()):
        c = np.zeros((len(cls.INDEX),) + tuple(batch_shape))
        for (i, j), v in coeffs.items():
            c[cls.POS[i, j]] = v
        return cls._wrap(c)

    # access
    @property
    def value(self):
        return self.c[0]

    @property
    def batch_shape(self):
        return self.c.shape[1:]

    def coeff(self, i: int, j: int):
        if i + j > self.ORDER or i < 0 or j < 0:
            raise IndexError(f"({i},{j}) outside order {self.ORDER}")
        return self.c[self.POS[i, j]]

    def __getitem__(self, ij):
        return self.coeff(*ij)

    def partial(self, i: int, j: int):
        """Raw partial derivative d^(i+j) f / dx^i dy^j."""
        return self.coeff(i, j) * (math.factorial(i) * math.factorial(j))

    def take(self, idx):
        """Sub-batch selection (numpy fancy indexing on the batch axes)."""
        return self._wrap(self.c[(slice(None),) + np.index_exp[idx]].copy())

    def to_dict(self) -> dict:
        return {ij: self.c[k] for k, ij in enumerate(self.INDEX)}

    def __repr__(self):
        if self.c.ndim == 1:
            body = ", ".join(f"{i}{j}:{v:.6g}" for (i, j), v in zip(self.INDEX, self.c))
        else:
            body = f"batch={self.batch_shape}"
        return f"{type(self).__name__}({body})"

    # arithmetic
    @staticmethod
    def _align(a: np.ndarray, b: np.ndarray):
        """Pad batch axes (after the coefficient axis) so numpy broadcasting lines up."""
        nd = max(a.ndim, b.ndim) - 1

        def pad(c):
            return c.reshape(c.shape[:1] + (1,) * (nd - (c.ndim - 1)) + c.shape[1:])
        return pad(a), pad(b)

    def _check(self, other):
        if isinstance(other, _Jet):
            if type(other) is not type(self):
                raise TypeError("cannot mix jets of different order")
            return True
        return False

    def _add_scalar(self, s):
        a, s = self._align(self.c, np.asarray(s, dtype=float)[None])
        c = np.array(np.broadcast_to(a, a.shape[:1] + np.broadcast_shapes(a.shape[1:], s.shape[1:])))
        c[0] = c[0] + s[0]
        return self._wrap(c)

    def __add__(self, other):
        if self._check(other):
            a, b = self._align(self.c, other.c)
            return self._wrap(a + b)
        return self._add_scalar(other)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.c)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if self._check(other):
            a, b = self._align(self.c, other.c)
            return self._wrap(a - b)
        return self._add_scalar(-np.asarray(other, dtype=float))

    def __rsub__(self, other):
        return (-self)._add_scalar(other)

    def __mul__(self, other):
        if self._check(other):
            a, b = self._align(self.c, other.c)
            prod = a[self._IA] * b[self._IB]
            return self._wrap(np.add.reduceat(prod, self._STARTS, axis=0))
        a, b = self._align(self.c, np.asarray(other, dtype=float)[None])
        return self._wrap(a * b)

    __rmul__ = __mul__

    def reciprocal(self, eps: float = RECIPROCAL_EPS):
        a0 = self.value
        if np.any(np.abs(a0) < eps) or not np.all(np.isfinite(a0)):
            raise DivisionByZeroJet("reciprocal of a jet with zero value")
        inv = 1.0 / a0
        coeffs = [inv * (-inv) ** k for k in range(self.ORDER + 1)]
        return self._compose_series(coeffs)

    def __truediv__(self, other):
        if self._check(other):
            return self * other.reciprocal()
        other = np.asarray(other, dtype=float)
        if np.any(other == 0):
            raise DivisionByZeroJet("division of a jet by zero")
        a, b = self._align(self.c, other[None])
        return self._wrap(a / b)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        return jet_pow(self, p)

    # helpers
    def nilpotent(self):
        c = np.array(self.c)
        c[0] = 0.0
        return self._wrap(c)

    def _compose_series(self, coeffs: Sequence):
        """sum_k coeffs[k] * h^k with h the zero-constant part of self (Horner)."""
        h = self.nilpotent()
        shape = np.broadcast_shapes(self.batch_shape, *(np.shape(f) for f in coeffs))
        out = type(self).const(np.broadcast_to(coeffs[-1], shape))
        for f in reversed(coeffs[:-1]):
            out = (out * h)._add_scalar(f)
        return out


class Jet4(_Jet, order=4):
    """Order-4 bivariate jet (15 coefficients)."""

    __slots__ = ()

    def to_jet2(self) -> "Jet2":
        return shift_to_derivative_jet(self, 0, 0)


class Jet2(_Jet, order=2):
    """Order-2 bivariate jet (6 coefficients)."""

    __slots__ = ()


def jet_var(index: int, value, cls=Jet4):
    """Jet of the coordinate function ``x`` (index 1) or ``y`` (index 2)."""
    return cls.var(index, value)


def jet_const(value, cls=Jet4):
    return cls.const(value)


def jet_arith(a, b, op: str, eps: float = RECIPROCAL_EPS):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if isinstance(b, _Jet):
            return a * b.reciprocal(eps)
        return a / b
    raise ValueError(f"unknown jet operation {op!r}")


def _require_positive(a, what):
    v = a.value if isinstance(a, _Jet) else np.asarray(a)
    if not np.all(v > 0):
        raise DomainError(f"{what} argument > 0")


def _binom(p: float, k: int) -> float:
    out = 1.0
    for m in range(k):
        out *= (p - m) / (m + 1)
    return out


def _int_pow(a, n: int):
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


def jet_pow(a, p):
    """a**p. Integer exponents work for any nonzero base; others need a > 0."""
    p = float(p)
    if not isinstance(a, _Jet):
        if p.is_integer():
            return np.asarray(a, dtype=float) ** int(p)
        _require_positive(a, "pow")
        return np.asarray(a, dtype=float) ** p
    if p.is_integer():
        n = int(p)
        if n == 0:
            return type(a).const(np.ones(a.batch_shape))
        out = _int_pow(a, abs(n))
        return out if n > 0 else out.reciprocal()
    _require_positive(a, "pow")
    a0 = a.value
    coeffs = [_binom(p, k) * a0 ** (p - k) for k in range(a.ORDER + 1)]
    return a._compose_series(coeffs)


def log(a):
    _require_positive(a, "log")
    if not isinstance(a, _Jet):
        return np.log(a)
    a0 = a.value
    coeffs = [np.log(a0)] + [(-1.0) ** (k + 1) / (k * a0**k) for k in range(1, a.ORDER + 1)]
    return a._compose_series(coeffs)


def sqrt(a):
    if not isinstance(a, _Jet):
        if np.any(np.asarray(a) < 0):
            raise DomainError("sqrt argument >= 0")
        return np.sqrt(a)
    _require_positive(a, "sqrt")
    a0 = a.value
    coeffs = [_binom(0.5, k) * a0 ** (0.5 - k) for k in range(a.ORDER + 1)]
    return a._compose_series(coeffs)


def exp(a):
    if not isinstance(a, _Jet):
        return np.exp(a)
    e0 = np.exp(a.value)
    coeffs = [e0 / math.factorial(k) for k in range(a.ORDER + 1)]
    return a._compose_series(coeffs)


_ELEM: dict[str, Callable] = {"ln": log, "log": log, "sqrt": sqrt, "exp": exp}


def jet_elem(a, fn: str, r: float | None = None):
    if fn == "pow":
        if r is None:
            raise ValueError("pow needs an exponent")
        return jet_pow(a, r)
    try:
        return _ELEM[fn](a)
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None


def derivative_jet(a: _Jet, i: int, j: int, cls=None):
    """Jet of d^(i+j) a / dx^i dy^j.

    The result has class ``cls`` (default: same as ``a``). Coefficients of
    total order above ``a.ORDER - i - j`` are not available and are set to 0.
    """
    cls = cls or type(a)
    n = i + j
    if i < 0 or j < 0 or n > a.ORDER:
        raise IndexError(f"derivative ({i},{j}) beyond jet order {a.ORDER}")
    c = np.zeros((len(cls.INDEX),) + a.batch_shape)
    for k, (p, q) in enumerate(cls.INDEX):
        if p + q + n > a.ORDER:
            continue
        scale = (math.factorial(p + i) // math.factorial(p)) * (
            math.factorial(q + j) // math.factorial(q))
        c[k] = a.c[a.POS[p + i, q + j]] * scale
    return cls._wrap(c)


def shift_to_derivative_jet(a: Jet4, i: int, j: int) -> Jet2:
    """Order-2 jet of the (i, j) partial derivative of an order-4 jet."""
    if i < 0 or j < 0 or i + j > 2:
        raise IndexError("shift_to_derivative_jet needs i + j <= 2")
    return derivative_jet(a, i, j, cls=Jet2)


def _powers(h: _Jet, n: int) -> list:
    out = [None, h]
    for _ in range(2, n + 1):
        out.append(out[-1] * h)
    return out


def compose(f: _Jet, u: _Jet, v: _Jet) -> _Jet:
    """Jet of ``f(u(x,y), v(x,y))``.

    ``f`` is a jet in its own variables (s, t) about (s0, t0); ``u`` and ``v``
    must have values s0 and t0 (only their zero-constant parts are used).
    """
    order = f.ORDER
    du = _powers(u.nilpotent(), order)
    dv = _powers(v.nilpotent(), order)
    shape = np.broadcast_shapes(f.batch_shape, u.batch_shape, v.batch_shape)
    out = np.zeros((len(f.INDEX),) + shape)
    out[0] = f.c[0]
    for k, (m, n) in enumerate(f.INDEX):
        if k == 0:
            continue
        if m == 0:
            term = dv[n]
        elif n == 0:
            term = du[m]
        else:
            term = du[m] * dv[n]
        out = out + f.c[k] * term.c
    return type(f)._wrap(out)


def revert(F: _Jet, base, other, axis: int = 0, iterations: int | None = None) -> _Jet:
    """Partial series reversion of ``F`` in one variable.

    ``F`` is a jet in (s, t) at (s0, t0). With axis=0 this returns the jet in
    (x, t) of ``s(x, t)`` solving ``F(s, t) = x``, expanded at
    ``(x0, t0) = (F.value, t0)``; ``base`` is s0 and ``other`` is t0.
    With axis=1 it returns ``t(s, y)`` solving ``F(s, t) = y`` at
    ``(s0, F.value)``; ``base`` is t0 and ``other`` is s0.
    """
    cls = type(F)
    iterations = iterations or cls.ORDER
    x0 = F.value
    if axis == 0:
        d = F.c[1]
        X = cls.var(1, x0)
        Y = cls.var(2, other)
    elif axis == 1:
        d = F.c[2]
        X = cls.var(1, other)
        Y = cls.var(2, x0)
    else:
        raise ValueError("axis must be 0 or 1")
    target = X if axis == 0 else Y
    if np.any(d == 0) or not np.all(np.isfinite(d)):
        raise DivisionByZeroJet("series reversion with vanishing derivative")
    A = (target - x0) / d + base
    for _ in range(iterations):
        if axis == 0:
            resid = compose(F, A, Y) - target
        else:
            resid = compose(F, X, A) - target
        A = A - resid / d
    return A

