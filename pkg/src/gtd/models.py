"""Black-hole fundamental equations and their closed-form oracles.

Three families (EMGB, EMGB with cosmological constant, EYMGB), each with the
area (Bekenstein-Hawking) entropy S = r^3 and the modified entropy
S = r^3 + 6 alpha r.  ``alpha`` is always the rescaled coupling alpha-tilde.

Closed forms are carried as oracles with a status flag:

* ``VerifiedAgainstRule``: reproduced independently from the general
  metric rule / first law; the jet pipeline must match it.
* ``PaperOnly``: a published form that does not follow from the rule; only
  the discrepancy factor against the pipeline is reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, ParamError, UnknownOracle
from .fundeq import (ENTHALPY, ENTROPY, GIBBS, MASS, ExplicitEquation, FundamentalEquation,
                     ParametricEquation, StatePoint)
from .jets import jet_pow as pw
from .jets import log, sqrt

VERIFIED = "VerifiedAgainstRule"
PAPER_ONLY = "PaperOnly"

SQRT3 = math.sqrt(3.0)


class Family(str, Enum):
    EMGB = "emgb"
    EMGB_LAMBDA = "emgb-lambda"
    EYMGB = "eymgb"


class EntropyKind(str, Enum):
    AREA = "area"
    MODIFIED = "modified"


class Ensemble(str, Enum):
    MASS = "mass"
    ENTROPY = "entropy"
    ENTHALPY = "enthalpy"
    GIBBS = "gibbs"


@dataclass(frozen=True)
class ModelId:
    family: Family
    entropy: EntropyKind
    ensemble: Ensemble

    def __str__(self):
        return f"{self.family.value}/{self.entropy.value}/{self.ensemble.value}"

    @classmethod
    def parse(cls, text: str) -> "ModelId":
        try:
            fam, ent, ens = text.split("/")
            return cls(Family(fam), EntropyKind(ent), Ensemble(ens))
        except ValueError:
            raise ParamError(f"malformed model id {text!r}") from None

    @classmethod
    def of(cls, family: str, entropy: str, ensemble: str) -> "ModelId":
        try:
            return cls(Family(family), EntropyKind(entropy), Ensemble(ensemble))
        except ValueError as exc:
            raise ParamError(str(exc)) from None


@dataclass(frozen=True)
class Oracle:
    name: str
    fn: Callable
    status: str
    quantity: str  # pipeline quantity it is compared against
    note: str = ""


@dataclass(frozen=True)
class ParamSpec:
    name: str
    required: bool
    default: float | None
    check: Callable[[float], bool]
    rule: str


# ---------------------------------------------------------------- helpers

def sq(a):
    return a * a


def ratio(num, den):
    """num/den with signed infinity when |den| < 1e-14 |num|."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    small = np.abs(den) < 1e-14 * np.abs(num)
    with np.errstate(all="ignore"):
        out = np.where(small, np.sign(num) * np.where(den < 0, -1.0, 1.0) * np.inf, num / den)
    return out[()] if out.ndim == 0 else out


def _scalar(x):
    x = np.asarray(x, dtype=float)
    return x[()] if x.ndim == 0 else x


def cardano_r(S, alpha):
    """Real root of r^3 + 6 alpha r = S (alpha > 0)."""
    S = np.asarray(S, dtype=float)
    d = np.sqrt(S * S / 4 + 8 * alpha**3)
    return np.cbrt(S / 2 + d) + np.cbrt(S / 2 - d)


def lambda_r_min(Q, Lam):
    """Smallest horizon radius with T >= 0: 3 r^4 - Lambda r^6 = Q^2 (Lambda < 0)."""
    Q2 = np.asarray(Q, dtype=float) ** 2
    z = np.maximum(np.sqrt(Q2 / 3.0), np.cbrt(Q2 / -Lam))
    for _ in range(80):
        g = -Lam * z**3 + 3 * z**2 - Q2
        dg = -3 * Lam * z**2 + 6 * z
        with np.errstate(all="ignore"):
            z = np.where(dg > 0, z - g / dg, z)
    return np.sqrt(z)


def _brentq_each(f, lo, hi, *arrays):
    """Vector wrapper: root of f(r, *args) in [lo, hi] per point (NaN if none)."""
    arrays = np.broadcast_arrays(*(np.asarray(a, float) for a in (lo, hi) + arrays))
    shape = arrays[0].shape
    flat = [a.ravel() for a in arrays]
    out = np.full(flat[0].size, np.nan)
    for k in range(out.size):
        a, b = flat[0][k], flat[1][k]
        args = tuple(x[k] for x in flat[2:])
        try:
            fa, fb = f(a, *args), f(b, *args)
            if fa == 0:
                out[k] = a
            elif fa * fb < 0:
                out[k] = brentq(f, a, b, args=args, xtol=1e-300, rtol=1e-15, maxiter=500)
        except (ValueError, ZeroDivisionError, FloatingPointError):
            pass
    return out.reshape(shape)


# ---------------------------------------------------------- fundamental eqs

def _emgb_mass(S, Q, p):
    s23 = pw(S, 2 / 3)
    return s23 + sq(Q) / (3 * s23)


def _emgb_enthalpy(S, phi, p):
    return pw(S, 2 / 3) * (1 - 0.75 * sq(phi))


def _emgb_gibbs(T, phi, p):
    u = 1 - 0.75 * sq(phi)
    return (4 / 27) * u * u * u / sq(T)


def _emgb_mod_entropy(M, Q, p):
    a = sqrt(M + 2 * Q / SQRT3)
    b = sqrt(M - 2 * Q / SQRT3)
    s = a + b
    return s * s * s / 8 + 3 * p["alpha"] * s


def _emgbl_mass(S, Q, p):
    s23 = pw(S, 2 / 3)
    return p["alpha"] / 3 + s23 + sq(Q) / (3 * s23) - p["Lambda"] / 6 * sq(s23)


def _emgbl_enthalpy(S, phi, p):
    s23 = pw(S, 2 / 3)
    return p["alpha"] / 3 + s23 * (1 - 0.75 * sq(phi)) - p["Lambda"] / 6 * sq(s23)


def _eymgb_mass(S, Q, p):
    return pw(S, 2 / 3) - (2 / 3) * sq(Q) * log(S)


def _eymgb_enthalpy(S, phi, p):
    return pw(S, 2 / 3) + 0.375 * sq(phi) / log(S)


def _mod_entropy_of_r(r, y, p):
    return r * r * r + 6 * p["alpha"] * r


def _emgbl_mass_of_r(r, Q, p):
    r2 = r * r
    return p["alpha"] / 3 + sq(Q) / (3 * r2) + r2 - p["Lambda"] / 6 * r2 * r2


def _eymgb_mass_of_r(r, Q, p):
    return r * r - 2 * sq(Q) * log(r)


def _emgb_mass_of_r(r, Q, p):
    r2 = r * r
    return r2 + sq(Q) / (3 * r2)


def _pos(label, index):
    if index == 1:
        return (label, lambda a, b, p: a > 0)
    return (label, lambda a, b, p: b > 0)


def _cardano_guess(x, y, p):
    return cardano_r(x, p["alpha"])


def _sqrt_guess(x, y, p):
    return np.sqrt(np.maximum(x, 1e-12))


def emgb_modified_parametric(alpha: float) -> ParametricEquation:
    """EMGB modified-entropy S(M, Q) defined through the horizon radius."""
    params = {"alpha": float(alpha)}
    return ParametricEquation(
        representation=ENTROPY, params=params, name="emgb/modified/entropy:parametric",
        domain=(("M>0", lambda M, Q, p: M > 0),
                ("q^2<1", lambda M, Q, p: M * M - 4 * Q * Q / 3 > 0)),
        coordinate_of_r=_emgb_mass_of_r, potential_of_r=_mod_entropy_of_r,
        bracket=lambda Q, p: (np.maximum(np.sqrt(np.abs(Q) / SQRT3), 1e-6), 1e6),
        guess=_sqrt_guess)


def emgb_area_entropy() -> ExplicitEquation:
    """EMGB area-entropy S(M, Q) = r_H^3 with r_H^2 = (M + sqrt(M^2 - 4Q^2/3))/2."""
    def expr(M, Q, p):
        r2 = (M + sqrt(M * M - (4 / 3) * sq(Q))) / 2
        return pw(r2, 1.5)
    return ExplicitEquation(
        representation=ENTROPY, name="emgb/area/entropy",
        domain=(("M>0", lambda M, Q, p: M > 0),
                ("q^2<1", lambda M, Q, p: M * M - 4 * Q * Q / 3 > 0)),
        expression=expr)


# --------------------------------------------------------------- oracles

def _o(name, fn, status=VERIFIED, quantity=None, note=""):
    return Oracle(name, fn, status, quantity or name, note)


def _emgb_area_mass_oracles():
    def A(v):
        return 3 * v["S"] ** (4 / 3) - v["Q"] ** 2

    def B(v):
        return 3 * v["S"] ** (4 / 3) - 5 * v["Q"] ** 2

    return [
        _o("T", lambda v: (2 / 9) * A(v) / v["S"] ** (5 / 3)),
        _o("phi", lambda v: (2 / 3) * v["Q"] / v["S"] ** (2 / 3)),
        _o("C_Q", lambda v: ratio(-3 * v["S"] * A(v), B(v))),
        _o("g11", lambda v: (4 / 27) * A(v) / v["S"] ** (4 / 3) * B(v) / (9 * v["S"] ** 2)),
        _o("g22", lambda v: (4 / 27) * A(v) / v["S"] ** (4 / 3)),
        _o("R", lambda v: ratio(-243 * v["S"] ** (8 / 3), A(v) * B(v) ** 2)),
    ]


def _emgb_area_enthalpy_oracles():
    def u(v):
        return 1 - 0.75 * v["phi"] ** 2

    return [
        _o("T", lambda v: (2 / 3) * v["S"] ** (-1 / 3) * u(v)),
        _o("C_phi", lambda v: -3 * v["S"]),
        _o("g11", lambda v: u(v) * (4 / 27) * v["S"] ** (-2 / 3) * u(v)),
        _o("g22", lambda v: -u(v) * v["S"] ** (4 / 3)),
        _o("R", lambda v: ratio(3.0, v["S"] ** (4 / 3) * u(v) ** 3)),
    ]


def _emgb_gibbs_oracles():
    def u(v):
        return 1 - 0.75 * v["phi"] ** 2

    def pref(v):
        return 4 / (81 * v["T"] ** 4) * u(v) ** 4

    return [
        _o("S", lambda v: 8 / (27 * v["T"] ** 3) * u(v) ** 3, quantity="S"),
        _o("Q", lambda v: 2 * v["phi"] / (3 * v["T"] ** 2) * u(v) ** 2, quantity="Q"),
        _o("G", lambda v: 4 / (27 * v["T"] ** 2) * u(v) ** 3, quantity="G",
           note="G = M - TS - phi Q evaluated on S(T,phi), Q(T,phi)"),
        _o("G_printed", lambda v: 4 / (27 * v["T"] ** 2) * u(v) ** 2, PAPER_ONLY, "G",
           note="published Gibbs potential (exponent 2); inconsistent with G_T = -S"),
        _o("C_phi", lambda v: -3 * 8 / (27 * v["T"] ** 3) * u(v) ** 3),
        _o("g11", lambda v: pref(v) * 16 / (3 * v["T"] ** 2) * u(v) ** 2),
        _o("g22", lambda v: pref(v) * (4 - 15 * v["phi"] ** 2)),
        _o("R", lambda v: ratio(-729 * v["T"] ** 4, u(v) ** 5 * (4 - 15 * v["phi"] ** 2) ** 2)),
    ]


def _emgb_mod_oracles():
    def parts(v):
        q, M, al = v["q"], v["M"], v["alpha"]
        s = np.sqrt(1 - q * q)
        return q, M, al, s, np.sqrt(1 + q) + np.sqrt(1 - q)

    def T(v):
        q, M, al, s, w = parts(v)
        return (8 / 3) * np.sqrt(M * (1 - q * q)) / ((4 * al + M + M * s) * w)

    def phi(v):
        q, M, al, s, w = parts(v)
        return 2 / SQRT3 * (np.sqrt(1 + q) - np.sqrt(1 - q)) / w

    def CQ(v):
        q, M, al, s, w = parts(v)
        num = -0.75 * np.sqrt(M) * s * w * (4 * al + M + M * s) ** 2
        return ratio(num, M * (1 - 3 * q * q) + (4 * al + M) * s - 8 * al)

    def pref(v):
        q, M, al, s, w = parts(v)
        r = v["r"]
        return -(3 * r * (r * r + 2 * al)) / (8 * s * M * M)

    def g11(v):
        q, M, al, s, w = parts(v)
        r = v["r"]
        return pref(v) * 3 * r * (2 * r * r - 3 * q * q * M + 4 * al * (s - 2)) / (2 * (1 - q * q) ** 1.5)

    def g22(v):
        q, M, al, s, w = parts(v)
        return pref(v) * np.sqrt(M) * ((4 * al + (2 + q) * M) / (1 + q) ** 1.5
                                       + (4 * al + (2 - q) * M) / (1 - q) ** 1.5)

    return [_o("T", T), _o("phi", phi), _o("C_Q", CQ), _o("g11", g11), _o("g22", g22)]


def _emgbl_area_mass_oracles():
    def A(v):
        return 3 * v["S"] ** (4 / 3) - v["Q"] ** 2 - v["Lambda"] * v["S"] ** 2

    def B(v):
        return 3 * v["S"] ** (4 / 3) - 5 * v["Q"] ** 2 + v["Lambda"] * v["S"] ** 2

    def N(v):
        S, Q, L = v["S"], v["Q"], v["Lambda"]
        return (42 * Q**2 * S ** (7 / 3) * L - 34 * S * Q**4 * L - 5 * S**3 * Q**2 * L**2
                - 18 * Q**4 * S ** (1 / 3) - 7 * S**5 * L**3 + 36 * S ** (11 / 3) * L
                + 15 * S ** (13 / 3) * L**2 - 162 * S**3 + 108 * Q**2 * S ** (5 / 3))

    return [
        _o("T", lambda v: (2 / 9) * A(v) / v["S"] ** (5 / 3)),
        _o("phi", lambda v: 2 * v["Q"] / (3 * v["S"] ** (2 / 3))),
        _o("C_Q", lambda v: ratio(3 * v["S"] * A(v),
                                  5 * v["Q"] ** 2 - 3 * v["S"] ** (4 / 3) - v["Lambda"] * v["S"] ** 2)),
        _o("g11", lambda v: 4 / (27 * v["S"] ** (4 / 3)) * A(v) * B(v) / (9 * v["S"] ** 2)),
        _o("g22", lambda v: 4 / (27 * v["S"] ** (4 / 3)) * A(v)),
        _o("R", lambda v: ratio(13.5 * v["S"] ** (7 / 3) * N(v), A(v) ** 3 * B(v) ** 2)),
    ]


def _emgbl_area_enthalpy_oracles():
    def A(v):
        return 12 * v["S"] ** (1 / 3) - 9 * v["phi"] ** 2 * v["S"] ** (1 / 3)

    def N(v):
        S, f, L = v["S"], v["phi"], v["Lambda"]
        return ((A(v) - 4 * L * S) ** 2 + L * S ** (4 / 3)
                * (27 * f**2 * (4 - 3 * f**2) + 2 * L * S ** (2 / 3) * (9 * f**2 - 4 * L * S ** (2 / 3) - 4)))

    def den(v):
        return (A(v) - 4 * v["Lambda"] * v["S"]) ** 3 * (A(v) + 4 * v["Lambda"] * v["S"]) ** 2

    def u(v):
        return 1 - 0.75 * v["phi"] ** 2

    def w(v, s):
        return u(v) + s * v["Lambda"] / 3 * v["S"] ** (2 / 3)

    S_ = "S"
    return [
        _o("C_phi", lambda v: ratio(-3 * v[S_] * (A(v) - 4 * v["Lambda"] * v[S_]),
                                    A(v) + 4 * v["Lambda"] * v[S_])),
        _o("g11", lambda v: w(v, -1) * (4 / 27) * v[S_] ** (-2 / 3) * w(v, 1)),
        _o("g22", lambda v: -w(v, -1) * v[S_] ** (4 / 3)),
        _o("R", lambda v: ratio(5184 * v[S_] ** (-1 / 3) * N(v), den(v)),
           note="published N-numerator form with the overall factor 5184 S^(-1/3) restored"),
        _o("R_printed", lambda v: ratio(N(v), den(v)), PAPER_ONLY, "R",
           note="published curvature without the overall factor"),
    ]


def _emgbl_mod_common():
    def A(v):
        r, Q, L = v["r"], v["Q"], v["Lambda"]
        return 3 * r**4 - Q**2 - L * r**6

    def D(v):
        r, Q, L, al = v["r"], v["Q"], v["Lambda"], v["alpha"]
        return (6 * al * Q**2 + 5 * Q**2 * r**2 + 6 * al * r**4
                - 3 * r**6 * (1 + 2 * al * L) - L * r**8)

    return A, D


def _emgbl_mod_mass_oracles():
    A, D = _emgbl_mod_common()

    def f1(v):
        r, al = v["r"], v["alpha"]
        return 4 / 243 * (r**2 + 6 * al) * A(v) / (r**6 * (r**2 + 2 * al) ** 4)

    return _emgbl_mod_thermo(A, D) + [
        _o("g11_printed", lambda v: -f1(v) * (D(v) - 6 * v["alpha"] * v["Q"] ** 2), PAPER_ONLY, "g11",
           note="published dS^2 coefficient (drops the 6 alpha Q^2 term of the C_Q denominator)"),
        _o("g22_printed", lambda v: -f1(v) * 9 * v["r"] * (v["r"] ** 2 + 2 * v["alpha"]) ** 2,
           PAPER_ONLY, "g22"),
    ]


def _emgbl_mod_thermo(A, D):
    def T(v):
        r, al = v["r"], v["alpha"]
        return 2 * A(v) / (9 * r**3 * (r**2 + 2 * al))

    def CQ(v):
        r, al = v["r"], v["alpha"]
        return ratio(3 * r * (r**2 + 2 * al) ** 2 * A(v), D(v))

    return [_o("T", T), _o("phi", lambda v: 2 * v["Q"] / (3 * v["r"] ** 2)), _o("C_Q", CQ)]


def _emgbl_mod_entropy_oracles():
    A, D = _emgbl_mod_common()
    return _emgbl_mod_thermo(A, D)


def _eymgb_area_mass_oracles():
    def s23(v):
        return v["S"] ** (2 / 3)

    return [
        _o("T", lambda v: (2 / 3) * (s23(v) - v["Q"] ** 2) / v["S"]),
        _o("phi", lambda v: -(4 / 3) * v["Q"] * np.log(v["S"])),
        _o("C_Q", lambda v: ratio(-3 * v["S"] * (s23(v) - v["Q"] ** 2), s23(v) - 3 * v["Q"] ** 2)),
        _o("C_S", lambda v: ratio(-3.0, 4 * np.log(v["S"]))),
        _o("g11", lambda v: (4 / 27) * (s23(v) - v["Q"] ** 2) * (s23(v) - 3 * v["Q"] ** 2) / v["S"] ** 2),
        _o("g22", lambda v: (4 / 27) * (s23(v) - v["Q"] ** 2) * (-6 * np.log(v["S"]))),
    ]


def _eymgb_area_enthalpy_oracles():
    def parts(v):
        S, f = v["S"], v["phi"]
        ln = np.log(S)
        return S, f, ln, 16 * S ** (2 / 3) * ln**2 - 9 * f**2

    def T(v):
        S, f, ln, a = parts(v)
        return a / (24 * S * ln**2)

    def CP(v):
        S, f, ln, a = parts(v)
        return ratio(3 * S * ln * a, -16 * S ** (2 / 3) * ln**3 + 27 * f**2 * (2 + ln))

    def g11(v):
        S, f, ln, a = parts(v)
        return a / ln**3 * (-16 * S ** (2 / 3) * ln**3 + 27 * f**2 * (2 + ln)) / (54 * S**2 * ln**2)

    def g22(v):
        S, f, ln, a = parts(v)
        return -a / ln**3

    return [
        _o("T", T),
        _o("Q", lambda v: -3 * v["phi"] / (4 * np.log(v["S"])), quantity="Q"),
        _o("C_phi", CP),
        _o("g11_printed", g11, PAPER_ONLY, "g11", note="published metric; constant factor off the rule"),
        _o("g22_printed", g22, PAPER_ONLY, "g22", note="published metric; constant factor off the rule"),
    ]


def _eymgb_mod_thermo():
    def T(v):
        r, Q, al = v["r"], v["Q"], v["alpha"]
        return (2 / 3) * (r**2 - Q**2) / (r * (r**2 + 2 * al))

    def D(v):
        r, Q, al = v["r"], v["Q"], v["alpha"]
        return -r**4 + (2 * al + 3 * Q**2) * r**2 + 2 * Q**2 * al

    def CQ(v):
        r, Q, al = v["r"], v["Q"], v["alpha"]
        return ratio(3 * r * (r**2 - Q**2) * (r**2 + 2 * al) ** 2, D(v))

    return T, D, CQ


def _eymgb_mod_mass_oracles():
    T, D, CQ = _eymgb_mod_thermo()

    def pref(v):
        r, Q, al = v["r"], v["Q"], v["alpha"]
        return -(4 / 27) * (r**2 + 6 * al) * (r**2 - Q**2) / (r**2 * (r**2 + 2 * al) ** 4)

    return [
        _o("T", T), _o("C_Q", CQ),
        _o("phi_printed", lambda v: 4 * v["Q"] * np.log(v["r"]), PAPER_ONLY, "phi",
           note="published electric potential; opposite sign to dM/dQ at fixed S"),
        _o("C_S", lambda v: ratio(-1.0, 4 * np.log(v["r"]))),
        _o("g11", lambda v: pref(v) * D(v)),
        _o("g22", lambda v: pref(v) * 18 * v["r"] ** 2 * (v["r"] ** 2 + 2 * v["alpha"]) ** 3 * np.log(v["r"])),
    ]


def _eymgb_mod_entropy_oracles():
    T, D, CQ = _eymgb_mod_thermo()
    return [_o("T", T), _o("C_Q", CQ),
            _o("phi_printed", lambda v: 4 * v["Q"] * np.log(v["r"]), PAPER_ONLY, "phi",
               note="published electric potential; opposite sign to dM/dQ at fixed S")]


# ------------------------------------------------------------------ catalog

def _neg(x):
    return x < 0


def _posv(x):
    return x > 0


P_ALPHA_NEG = ParamSpec("alpha", True, None, _neg, "alpha<0")
P_ALPHA_POS = ParamSpec("alpha", True, None, _posv, "alpha>0")
P_ALPHA_DEFAULT = ParamSpec("alpha", False, 1.0, _posv, "alpha>0")
P_LAMBDA = ParamSpec("Lambda", True, None, _neg, "Lambda<0")


@dataclass(frozen=True)
class CatalogEntry:
    id: ModelId
    params: tuple
    inputs: tuple  # accepted state-variable names
    figures: tuple
    reference: Mapping[str, float]
    description: str


def _id(f, e, n):
    return ModelId(Family(f), EntropyKind(e), Ensemble(n))


_CATALOG = (
    CatalogEntry(_id("emgb", "area", "mass"), (), ("S", "Q"),
                 ("Fig. 1: T, C_Q, R vs S at Q=1", "Fig. 1d: potentials and F minima vs S"),
                 {}, "M(S,Q) = S^(2/3) + Q^2/(3 S^(2/3))"),
    CatalogEntry(_id("emgb", "area", "enthalpy"), (), ("S", "phi"), (),
                 {}, "H(S,phi) = S^(2/3)(1 - 3 phi^2/4)"),
    CatalogEntry(_id("emgb", "area", "gibbs"), (), ("T", "phi"), (),
                 {}, "G(T,phi) = 4 (1 - 3 phi^2/4)^3 / (27 T^2)"),
    CatalogEntry(_id("emgb", "modified", "entropy"), (P_ALPHA_NEG,), ("M", "Q", "q"),
                 ("Fig. 2: T, C_Q, S vs q and alpha at M=1", "Fig. 3: C_Q vs q, alpha=-1/4 and -1/10",
                  "Fig. 4: R vs q, alpha=-1/4 and -1/10"),
                 {"alpha": -0.1}, "S(M,Q) = s^3/8 + 3 alpha s, s = sqrt(M+2Q/sqrt3) + sqrt(M-2Q/sqrt3)"),
    CatalogEntry(_id("emgb-lambda", "area", "mass"), (P_LAMBDA, P_ALPHA_DEFAULT), ("S", "Q"),
                 ("Fig. 8: T, C_Q vs S, Lambda=-1", "Fig. 9: R vs S, Lambda=-1, Q=1/2",
                  "Fig. 9e: capacities and potentials, Q=1/2", "Fig. 9g: F vs S for several Q"),
                 {"Lambda": -1.0, "alpha": 1.0},
                 "M(S,Q) = alpha/3 + S^(2/3) + Q^2/(3 S^(2/3)) - Lambda S^(4/3)/6"),
    CatalogEntry(_id("emgb-lambda", "area", "enthalpy"), (P_LAMBDA, P_ALPHA_DEFAULT), ("S", "phi"),
                 ("Fig. 9b: C_phi vs S", "Fig. 9c: C_phi and T at phi=1 and S=2"),
                 {"Lambda": -1.0, "alpha": 1.0},
                 "H(S,phi) = alpha/3 + S^(2/3)(1 - 3 phi^2/4) - Lambda S^(4/3)/6"),
    CatalogEntry(_id("emgb-lambda", "modified", "mass"), (P_LAMBDA, P_ALPHA_POS), ("S", "Q", "r"),
                 ("Fig. 10: T, C_Q, R vs r, Lambda=-1, Q=1",),
                 {"Lambda": -1.0, "alpha": 0.25},
                 "S = r^3 + 6 alpha r, M = alpha/3 + Q^2/(3r^2) + r^2 - Lambda r^4/6"),
    CatalogEntry(_id("emgb-lambda", "modified", "entropy"), (P_LAMBDA, P_ALPHA_POS), ("M", "Q", "r"),
                 ("Fig. 10: T, C_Q vs r, Lambda=-1, Q=1",),
                 {"Lambda": -1.0, "alpha": 0.25},
                 "S = r^3 + 6 alpha r, M = alpha/3 + Q^2/(3r^2) + r^2 - Lambda r^4/6"),
    CatalogEntry(_id("eymgb", "area", "mass"), (), ("S", "Q"),
                 ("Fig. 5: T, C_Q vs Q at S=10", "Fig. 6: R vs Q at S=10",
                  "Fig. 6c: capacities and potentials, Q=1", "Fig. 6e: F and C_Q vs S"),
                 {}, "M(S,Q) = S^(2/3) - (2/3) Q^2 ln S"),
    CatalogEntry(_id("eymgb", "area", "enthalpy"), (), ("S", "phi"),
                 ("Fig. 6a: C_phi and T vs S at phi=1",),
                 {}, "H(S,phi) = S^(2/3) + 3 phi^2/(8 ln S)"),
    CatalogEntry(_id("eymgb", "modified", "mass"), (P_ALPHA_POS,), ("S", "Q", "r"),
                 ("Fig. 7: T, C_Q, R vs r, Q=1, alpha=1",),
                 {"alpha": 1.0}, "S = r^3 + 6 alpha r, M = r^2 - 2 Q^2 ln r"),
    CatalogEntry(_id("eymgb", "modified", "entropy"), (P_ALPHA_POS,), ("M", "Q", "r"),
                 ("Fig. 7: T, C_Q vs r, Q=1, alpha=1",),
                 {"alpha": 1.0}, "S = r^3 + 6 alpha r, M = r^2 - 2 Q^2 ln r"),
)

_BY_ID = {str(e.id): e for e in _CATALOG}

# default ensemble for a (family, entropy) pair
DEFAULT_ENSEMBLE = {
    ("emgb", "area"): "mass", ("emgb", "modified"): "entropy",
    ("emgb-lambda", "area"): "mass", ("emgb-lambda", "modified"): "mass",
    ("eymgb", "area"): "mass", ("eymgb", "modified"): "mass",
}


def model_catalog() -> list[CatalogEntry]:
    return list(_CATALOG)


def catalog_entry(mid: ModelId | str) -> CatalogEntry:
    try:
        return _BY_ID[str(mid)]
    except KeyError:
        raise ParamError(f"model {mid} is not available") from None


def model_param_names() -> set:
    return {"alpha", "Lambda"}


# ------------------------------------------------------------------- bundle

@dataclass(frozen=True)
class ModelBundle:
    id: ModelId
    eq: FundamentalEquation
    oracles: Mapping[str, Oracle]
    params: Mapping[str, float]
    inputs: tuple
    _resolver: Callable = field(repr=False, default=None)
    _variables: Callable = field(repr=False, default=None)

    @property
    def oracle_status(self) -> dict:
        return {k: o.status for k, o in self.oracles.items()}

    @property
    def coords(self):
        return self.eq.representation.coords

    def resolve(self, values: Mapping[str, object]) -> StatePoint:
        """StatePoint from named inputs (coordinates or adapter variables)."""
        unknown = set(values) - set(self.inputs)
        if unknown:
            raise ParamError(f"unknown state variable(s) for {self.id}: {', '.join(sorted(unknown))}")
        return self._resolver(dict(values), self.params)

    def variables(self, p: StatePoint) -> dict:
        """Oracle variables (coordinates plus derived closed-form variables)."""
        e1, e2 = p.arrays()
        c1, c2 = self.coords
        v = dict(self.params)
        v[c1], v[c2] = _scalar(e1), _scalar(e2)
        if self._variables is not None:
            v.update(self._variables(v))
        return v


def _direct(c1, c2):
    def resolve(values, params):
        missing = [c for c in (c1, c2) if c not in values]
        if missing:
            raise ParamError(f"missing state variable(s): {', '.join(missing)}")
        return StatePoint(values[c1], values[c2])
    return resolve


def _resolve_q(values, params):
    if "Q" in values and "q" in values:
        raise ParamError("give either Q or q, not both")
    if "M" not in values:
        raise ParamError("missing state variable(s): M")
    M = np.asarray(values["M"], float)
    if "q" in values:
        Q = SQRT3 * M * np.asarray(values["q"], float) / 2
    elif "Q" in values:
        Q = values["Q"]
    else:
        raise ParamError("missing state variable(s): Q or q")
    return StatePoint(_scalar(M), _scalar(Q))


def _resolve_r(first, coord_of_r):
    def resolve(values, params):
        if "Q" not in values:
            raise ParamError("missing state variable(s): Q")
        if "r" in values and first in values:
            raise ParamError(f"give either {first} or r, not both")
        if "r" in values:
            r = np.asarray(values["r"], float)
            if np.any(r <= 0):
                raise DomainError("r>0")
            e1 = coord_of_r(r, np.asarray(values["Q"], float), params)
        elif first in values:
            e1 = values[first]
        else:
            raise ParamError(f"missing state variable(s): {first} or r")
        return StatePoint(_scalar(e1), values["Q"])
    return resolve


def _check_params(entry: CatalogEntry, params: Mapping[str, float]) -> dict:
    allowed = {s.name: s for s in entry.params}
    unknown = set(params) - set(allowed)
    if unknown:
        raise ParamError(f"unknown parameter(s) for {entry.id}: {', '.join(sorted(unknown))}")
    out = {}
    for name, spec in allowed.items():
        if name in params:
            try:
                val = float(params[name])
            except (TypeError, ValueError):
                raise ParamError(f"parameter {name} must be a number") from None
        elif spec.required:
            raise ParamError(f"missing required parameter {name} ({spec.rule})")
        else:
            val = spec.default
        if not math.isfinite(val) or not spec.check(val):
            raise ParamError(f"parameter {name}={val} violates {spec.rule}")
        out[name] = val
    return out


def make_model(mid: ModelId | str, params: Mapping[str, float] | None = None) -> ModelBundle:
    """Construct a model bundle (fundamental equation plus oracles)."""
    if isinstance(mid, str):
        mid = ModelId.parse(mid)
    entry = catalog_entry(mid)
    p = _check_params(entry, params or {})
    key = str(mid)
    fam, ens = mid.family.value, mid.ensemble.value
    rep = {"mass": MASS, "entropy": ENTROPY, "enthalpy": ENTHALPY, "gibbs": GIBBS}[ens]
    c1, c2 = rep.coords
    variables = None
    resolver = _direct(c1, c2)

    if mid.entropy is EntropyKind.AREA:
        expr, oracles = {
            "emgb/area/mass": (_emgb_mass, _emgb_area_mass_oracles),
            "emgb/area/enthalpy": (_emgb_enthalpy, _emgb_area_enthalpy_oracles),
            "emgb/area/gibbs": (_emgb_gibbs, _emgb_gibbs_oracles),
            "emgb-lambda/area/mass": (_emgbl_mass, _emgbl_area_mass_oracles),
            "emgb-lambda/area/enthalpy": (_emgbl_enthalpy, _emgbl_area_enthalpy_oracles),
            "eymgb/area/mass": (_eymgb_mass, _eymgb_area_mass_oracles),
            "eymgb/area/enthalpy": (_eymgb_enthalpy, _eymgb_area_enthalpy_oracles),
        }[key]
        domain = [_pos(f"{c1}>0", 1)]
        if key == "eymgb/area/enthalpy":
            domain.append(("ln S!=0", lambda S, f, q: S != 1))
        eq = ExplicitEquation(representation=rep, params=p, domain=tuple(domain), name=key,
                              expression=expr)
        oracle_list = oracles()
    elif fam == "emgb":
        eq = ExplicitEquation(
            representation=ENTROPY, params=p, name=key, expression=_emgb_mod_entropy,
            domain=(("M>0", lambda M, Q, q: M > 0),
                    ("q^2<1", lambda M, Q, q: M * M - 4 * Q * Q / 3 > 0)))
        oracle_list = _emgb_mod_oracles()
        resolver = _resolve_q

        def variables(v):
            M, Q = np.asarray(v["M"], float), np.asarray(v["Q"], float)
            with np.errstate(all="ignore"):
                a, b = np.sqrt(M + 2 * Q / SQRT3), np.sqrt(M - 2 * Q / SQRT3)
                return {"q": _scalar(2 * Q / (SQRT3 * M)), "r": _scalar((a + b) / 2)}
    else:
        m_of_r = _emgbl_mass_of_r if fam == "emgb-lambda" else _eymgb_mass_of_r
        if fam == "emgb-lambda":
            def r_lo(Q, q):
                return lambda_r_min(Q, q["Lambda"])
        else:
            def r_lo(Q, q):
                return np.maximum(np.abs(Q), 0.0)
        if ens == "mass":
            eq = ParametricEquation(
                representation=MASS, params=p, name=key, domain=(("S>0", lambda S, Q, q: S > 0),),
                coordinate_of_r=_mod_entropy_of_r, potential_of_r=m_of_r,
                bracket=lambda Q, q: (1e-6, 1e6), guess=_cardano_guess)
            resolver = _resolve_r("S", lambda r, Q, q: _mod_entropy_of_r(r, Q, q))

            def variables(v):
                S = np.asarray(v["S"], float)
                r = _brentq_each(lambda r, s, al: r**3 + 6 * al * r - s, 0.0,
                                 np.maximum(np.cbrt(S), S / (6 * v["alpha"])) + 1.0, S, v["alpha"])
                return {"r": _scalar(r)}
        else:
            def m_min(M, Q, q):
                return m_of_r(np.maximum(r_lo(Q, q), 1e-300), Q, q)

            eq = ParametricEquation(
                representation=ENTROPY, params=p, name=key,
                domain=(("M>M(T=0)", lambda M, Q, q: M > np.where(r_lo(Q, q) > 0, m_min(M, Q, q), 0.0)),),
                coordinate_of_r=m_of_r, potential_of_r=_mod_entropy_of_r,
                bracket=lambda Q, q: (np.maximum(r_lo(Q, q), 1e-6), 1e6), guess=_sqrt_guess)
            resolver = _resolve_r("M", m_of_r)

            def variables(v):
                M, Q = np.asarray(v["M"], float), np.asarray(v["Q"], float)
                lo = np.maximum(r_lo(Q, v), 1e-9)
                r = _brentq_each(lambda r, m, qq: float(m_of_r(r, qq, v)) - m, lo,
                                 2 * np.sqrt(np.abs(M) + Q**2) + 10.0, M, Q)
                return {"r": _scalar(r)}
        oracle_list = (_emgbl_mod_mass_oracles() if (fam, ens) == ("emgb-lambda", "mass") else
                       _emgbl_mod_entropy_oracles() if fam == "emgb-lambda" else
                       _eymgb_mod_mass_oracles() if ens == "mass" else _eymgb_mod_entropy_oracles())

    return ModelBundle(id=mid, eq=eq, oracles={o.name: o for o in oracle_list}, params=p,
                       inputs=entry.inputs, _resolver=resolver, _variables=variables)


def oracle_eval(bundle: ModelBundle, name: str, p: StatePoint):
    """Closed-form oracle value at p (plain floating point)."""
    try:
        oracle = bundle.oracles[name]
    except KeyError:
        raise UnknownOracle(f"{bundle.id} has no oracle {name!r}") from None
    bundle.eq.check_domain(p)
    v = bundle.variables(p)
    with np.errstate(all="ignore"):
        return _scalar(oracle.fn(v))
