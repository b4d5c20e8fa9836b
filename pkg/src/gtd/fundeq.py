"""Fundamental equations in the four representations and their jet evaluation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import (DegenerateJacobianError, DomainError, GTDError, NoRootError,
                     WrongRepresentation)
from .jets import Jet2, Jet4, compose, derivative_jet, revert

NEWTON_TOL = 1e-13
DEGENERACY_TOL = 1e-12
DEFAULT_BRACKET = (1e-6, 1e6)


@dataclass(frozen=True)
class Representation:
    """Sign table of a first law ``dPhi = s1 I1 dE1 + s2 I2 dE2``.

    The conjugate intensive ``I^a`` equals ``signs[a] * dPhi/dE^a``.
    """

    tag: str
    potential: str
    coords: tuple
    conjugates: tuple
    signs: tuple

    @property
    def first_law(self) -> str:
        terms = []
        for s, i, e in zip(self.signs, self.conjugates, self.coords):
            terms.append(f"{'+' if s > 0 else '-'} {i} d{e}")
        return f"d{self.potential} = " + " ".join(terms).lstrip("+ ")

    def __str__(self):
        return self.tag


MASS = Representation("mass", "M", ("S", "Q"), ("T", "phi"), (1, 1))
ENTROPY = Representation("entropy", "S", ("M", "Q"), ("1/T", "phi/T"), (1, -1))
ENTHALPY = Representation("enthalpy", "H", ("S", "phi"), ("T", "Q"), (1, -1))
GIBBS = Representation("gibbs", "G", ("T", "phi"), ("S", "Q"), (-1, -1))

REPRESENTATIONS = {r.tag: r for r in (MASS, ENTROPY, ENTHALPY, GIBBS)}


@dataclass(frozen=True)
class StatePoint:
    """Coordinates (e1, e2) in the representation's order; scalars or arrays."""

    e1: object
    e2: object

    def arrays(self):
        a, b = np.broadcast_arrays(np.asarray(self.e1, dtype=float),
                                   np.asarray(self.e2, dtype=float))
        return a, b

    @property
    def batch_shape(self):
        return np.broadcast_shapes(np.shape(self.e1), np.shape(self.e2))

    def __getitem__(self, idx):
        a, b = self.arrays()
        return StatePoint(a[idx], b[idx])


# (label, predicate(e1, e2, params) -> bool array)
Constraint = tuple


@dataclass(frozen=True)
class FundamentalEquation:
    representation: Representation
    params: Mapping[str, float] = field(default_factory=dict)
    domain: Sequence[Constraint] = ()
    name: str = ""

    kind = "abstract"

    def domain_mask(self, p: StatePoint) -> np.ndarray:
        e1, e2 = p.arrays()
        ok = np.ones(e1.shape, dtype=bool)
        with np.errstate(all="ignore"):
            ok &= np.isfinite(e1) & np.isfinite(e2)
            for _, pred in self.domain:
                ok &= np.asarray(pred(e1, e2, self.params), dtype=bool)
        return ok

    def check_domain(self, p: StatePoint) -> None:
        e1, e2 = p.arrays()
        if not (np.all(np.isfinite(e1)) and np.all(np.isfinite(e2))):
            raise DomainError("finite coordinates")
        with np.errstate(all="ignore"):
            for label, pred in self.domain:
                if not np.all(pred(e1, e2, self.params)):
                    raise DomainError(label)

    def _jet(self, e1, e2) -> Jet4:
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitEquation(FundamentalEquation):
    """Potential given as an expression ``f(x, y, params)`` built from jet ops."""

    expression: Callable = None

    kind = "explicit"

    def _jet(self, e1, e2) -> Jet4:
        return self.expression(Jet4.var(1, e1), Jet4.var(2, e2), self.params)

    def value(self, e1, e2):
        return self.expression(np.asarray(e1, float), np.asarray(e2, float), self.params)


def _midpoint(lo, hi):
    """Geometric midpoint on wide positive brackets, arithmetic otherwise."""
    with np.errstate(all="ignore"):
        wide = (lo > 0) & (hi > 8 * lo)
        return np.where(wide, np.sqrt(np.abs(lo * hi)), 0.5 * (lo + hi))


@dataclass(frozen=True)
class ParametricEquation(FundamentalEquation):
    """Potential defined through a hidden variable r.

    ``coordinate_of_r(r, y, params)`` gives the first coordinate and
    ``potential_of_r(r, y, params)`` the potential; the second coordinate y is
    shared. The first coordinate must be strictly monotone in r on the bracket.
    """

    coordinate_of_r: Callable = None
    potential_of_r: Callable = None
    bracket: Optional[Callable] = None
    guess: Optional[Callable] = None
    hidden: str = "r"
    tol: float = NEWTON_TOL

    kind = "parametric"

    def _bracket(self, y):
        if self.bracket is None:
            lo, hi = DEFAULT_BRACKET
        else:
            lo, hi = self.bracket(y, self.params)
        lo = np.array(np.broadcast_to(lo, y.shape), dtype=float)
        hi = np.array(np.broadcast_to(hi, y.shape), dtype=float)
        return lo, hi

    def _coord_d(self, r, y):
        j = self.coordinate_of_r(Jet2.var(1, r), Jet2.const(y), self.params)
        return j.c[0], j.c[1]

    def _coord(self, r, y):
        return np.asarray(self.coordinate_of_r(r, y, self.params), dtype=float)

    def solve_hidden(self, e1, e2):
        """Safeguarded Newton (with bisection fallback) for r at (e1, e2)."""
        x, y = np.broadcast_arrays(np.asarray(e1, float), np.asarray(e2, float))
        lo, hi = self._bracket(y)
        with np.errstate(all="ignore"):
            flo = self._coord(lo, y) - x
            fhi = self._coord(hi, y) - x
        if not np.all(np.sign(flo) * np.sign(fhi) <= 0):
            raise NoRootError(f"no {self.hidden} in bracket solves the state equation")
        increasing = fhi > flo
        if self.guess is not None:
            with np.errstate(all="ignore"):
                r = np.asarray(self.guess(x, y, self.params), dtype=float) + 0 * x
            bad = ~np.isfinite(r) | (r < lo) | (r > hi)
            r = np.where(bad, _midpoint(lo, hi), r)
        else:
            r = _midpoint(lo, hi)
        tol = self.tol * np.maximum(1.0, np.abs(x))
        for _ in range(300):
            with np.errstate(all="ignore"):
                f, d = self._coord_d(r, y)
                f = f - x
                done = (np.abs(f) <= tol) | ((hi - lo) <= 4e-16 * np.abs(r))
                if np.all(done):
                    break
                below = (f < 0) == increasing
                lo = np.where(below & ~done, r, lo)
                hi = np.where(~below & ~done, r, hi)
                step = r - f / d
                ok = np.isfinite(step) & (step > lo) & (step < hi)
                mid = _midpoint(lo, hi)
            r = np.where(done, r, np.where(ok, step, mid))
        else:
            raise NoRootError(f"{self.hidden} solve did not converge")
        return r if r.ndim else float(r)

    def _jet(self, e1, e2) -> Jet4:
        r = self.solve_hidden(e1, e2)
        y = np.broadcast_to(np.asarray(e2, float), np.shape(r))
        rj = Jet4.var(1, r)
        yj = Jet4.var(2, y)
        X = self.coordinate_of_r(rj, yj, self.params)
        if np.any(np.abs(X.c[1]) < DEGENERACY_TOL):
            raise DegenerateJacobianError(
                f"d(coordinate)/d{self.hidden} vanishes at the solution")
        P = self.potential_of_r(rj, yj, self.params)
        R = revert(X, r, y, axis=0)
        return compose(P, R, yj)


@dataclass(frozen=True)
class LegendreEquation(FundamentalEquation):
    """Psi(x, y) = Phi(x, t) - sign * t * y with t eliminated by sign * Phi_t(x, t) = y."""

    base: FundamentalEquation = None
    sign: int = 1
    guess: Optional[Callable] = None
    tol: float = NEWTON_TOL

    kind = "legendre"

    def solve_conjugate(self, e1, e2):
        x, y = np.broadcast_arrays(np.asarray(e1, float), np.asarray(e2, float))
        if self.guess is not None:
            t = np.asarray(self.guess(x, y, self.params), dtype=float) + 0 * x
        else:
            t = np.zeros_like(x)
        tol = self.tol * np.maximum(1.0, np.abs(y))
        for _ in range(100):
            jet = _low_order_jet(self.base, x, t)
            g = self.sign * jet.c[2] - y
            dg = 2.0 * self.sign * jet.c[5]
            if np.any(np.abs(dg) < DEGENERACY_TOL):
                raise DegenerateJacobianError("second derivative along the transformed variable vanishes")
            if np.all(np.abs(g) <= tol):
                return t
            t = t - g / dg
            if not np.all(np.isfinite(t)):
                break
        raise NoRootError("conjugate relation could not be inverted")

    def _jet(self, e1, e2) -> Jet4:
        x, y = np.broadcast_arrays(np.asarray(e1, float), np.asarray(e2, float))
        t = self.solve_conjugate(x, y)
        phi = self.base._jet(x, t)
        F = derivative_jet(phi, 0, 1) * self.sign
        if np.any(np.abs(F.c[2]) < DEGENERACY_TOL):
            raise DegenerateJacobianError("second derivative along the transformed variable vanishes")
        T = revert(F, t, x, axis=1)
        px = compose(derivative_jet(phi, 1, 0), Jet4.var(1, x), T)
        py = T * (-self.sign)
        y0 = F.value
        c = np.zeros((len(Jet4.INDEX),) + x.shape)
        c[0] = phi.value - self.sign * t * y0
        for k, (i, j) in enumerate(Jet4.INDEX):
            if k == 0:
                continue
            if j >= 1:
                c[k] = py.coeff(i, j - 1) / j
            else:
                c[k] = px.coeff(i - 1, 0) / i
        return Jet4._wrap(c)


def _low_order_jet(eq: FundamentalEquation, x, t):
    if isinstance(eq, ExplicitEquation):
        return eq.expression(Jet2.var(1, x), Jet2.var(2, t), eq.params)
    return eq._jet(x, t)


def eval_jet(eq: FundamentalEquation, p: StatePoint) -> Jet4:
    """Jet of the potential at p (domain-checked)."""
    eq.check_domain(p)
    e1, e2 = p.arrays()
    if e1.ndim == 0:
        e1, e2 = float(e1), float(e2)
    return eq._jet(e1, e2)


def eval_parametric_jet(eq: ParametricEquation, p: StatePoint) -> Jet4:
    if not isinstance(eq, ParametricEquation):
        raise TypeError("eval_parametric_jet needs a parametric equation")
    return eval_jet(eq, p)


def eval_jet_masked(eq: FundamentalEquation, p: StatePoint):
    """Batch evaluation that never raises.

    Returns ``(jet, ok)``; coefficients at points with ``ok == False`` are NaN.
    Points failing the domain predicate are skipped; if the batch evaluation
    still raises, points are evaluated one by one.
    """
    e1, e2 = p.arrays()
    shape = e1.shape
    e1f, e2f = e1.ravel(), e2.ravel()
    ok = eq.domain_mask(StatePoint(e1f, e2f))
    c = np.full((len(Jet4.INDEX), e1f.size), np.nan)
    idx = np.flatnonzero(ok)
    if idx.size:
        try:
            with np.errstate(all="ignore"):
                jet = eq._jet(e1f[idx], e2f[idx])
            c[:, idx] = np.broadcast_to(jet.c, (c.shape[0], idx.size))
        except (GTDError, ArithmeticError, ValueError):
            for k in idx:
                try:
                    with np.errstate(all="ignore"):
                        c[:, k] = eq._jet(float(e1f[k]), float(e2f[k])).c
                except (GTDError, ArithmeticError, ValueError):
                    ok[k] = False
    ok &= np.all(np.isfinite(c), axis=0)
    return Jet4._wrap(c.reshape((c.shape[0],) + shape)), ok.reshape(shape)


_LEGENDRE_TARGET = {"mass": (ENTHALPY, 1), "enthalpy": (MASS, -1)}


def legendre_transform(eq: FundamentalEquation, pair: str = "second", *,
                       guess: Optional[Callable] = None, domain: Sequence[Constraint] = (),
                       name: str = "") -> LegendreEquation:
    """Numeric Legendre transform in the second coordinate.

    Mass -> Enthalpy (H = M - phi Q) and Enthalpy -> Mass (M = H + phi Q).
    """
    if pair != "second":
        raise ValueError("only the second-coordinate transform is supported")
    try:
        rep, sign = _LEGENDRE_TARGET[eq.representation.tag]
    except KeyError:
        raise WrongRepresentation(
            f"no second-coordinate transform from the {eq.representation.tag} representation") from None
    return LegendreEquation(representation=rep, params=eq.params, domain=tuple(domain),
                            name=name or f"{eq.name}:legendre", base=eq, sign=sign, guess=guess)


def to_entropy_representation(eq: ExplicitEquation, *, bracket: Optional[Callable] = None,
                              guess: Optional[Callable] = None,
                              domain: Sequence[Constraint] = ()) -> ParametricEquation:
    """S(M, Q) from an explicit M(S, Q), inverting M in S numerically."""
    if eq.representation is not MASS:
        raise WrongRepresentation("entropy adapter needs a mass-representation equation")
    return ParametricEquation(
        representation=ENTROPY, params=eq.params, domain=tuple(domain),
        name=f"{eq.name}:entropy",
        coordinate_of_r=lambda r, y, p: eq.expression(r, y, p),
        potential_of_r=lambda r, y, p: r,
        bracket=bracket, guess=guess, hidden="S")
