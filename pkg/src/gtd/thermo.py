"""Temperatures, conjugates, heat capacities and potentials from a potential's jet."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DivisionByZeroJet, WrongRepresentation
from .fundeq import FundamentalEquation, StatePoint, eval_jet

CAPACITY_GUARD = 1e-12


class CapacityKind(str, Enum):
    CQ = "C_Q"
    Cphi = "C_phi"
    CS = "C_S"


# representations in which each capacity is defined
CAPACITY_REPS = {
    CapacityKind.CQ: ("mass", "entropy"),
    CapacityKind.Cphi: ("enthalpy", "gibbs"),
    CapacityKind.CS: ("mass", "entropy"),
}
APPLICABLE = {"mass": CapacityKind.CQ, "entropy": CapacityKind.CQ,
              "enthalpy": CapacityKind.Cphi, "gibbs": CapacityKind.Cphi}


def capacity_ratio(num, den):
    """num/den, reported as signed infinity when |den| < 1e-12 |num|."""
    num, den = np.broadcast_arrays(np.asarray(num, float), np.asarray(den, float))
    with np.errstate(all="ignore"):
        small = np.abs(den) < CAPACITY_GUARD * np.abs(num)
        sgn = np.sign(num) * np.where(den < 0, -1.0, 1.0)
        out = np.where(small, sgn * np.inf, num / den)
    return out


def _partials(jet):
    c = jet.c
    return dict(P=c[0], P1=c[1], P2=c[2], P11=2 * c[3], P12=c[4], P22=2 * c[5])


def derived_quantities(rep_tag: str, jet, e1, e2) -> dict:
    """All first-law quantities from the jet (batch arrays, no domain checks).

    Keys: T, phi, S, Q, M, H, F, G, conj1, conj2, C_Q / C_phi / C_S and the
    inverse capacities inv_C_Q / inv_C_phi / inv_C_S (finite through divergences).
    """
    d = _partials(jet)
    P, P1, P2, P11, P12, P22 = (d[k] for k in ("P", "P1", "P2", "P11", "P12", "P22"))
    out = {}
    with np.errstate(all="ignore"):
        if rep_tag == "mass":
            S, Q = e1, e2
            T, phi = P1, P2
            M = P
            out.update(conj1=P1, conj2=P2)
            out["C_Q"] = capacity_ratio(P1, P11)
            out["inv_C_Q"] = P11 / P1
            out["C_S"] = capacity_ratio(np.ones_like(P22), P22)
            out["inv_C_S"] = P22
        elif rep_tag == "entropy":
            M, Q = e1, e2
            T = 1.0 / P1
            phi = -P2 / P1
            S = P
            out.update(conj1=P1, conj2=-P2)
            out["C_Q"] = capacity_ratio(-P1 * P1, P11)
            out["inv_C_Q"] = -P11 / (P1 * P1)
            m = -P2 / P1
            mqq = -(P22 + 2 * P12 * m + P11 * m * m) / P1
            out["C_S"] = capacity_ratio(np.ones_like(mqq), mqq)
            out["inv_C_S"] = mqq
        elif rep_tag == "enthalpy":
            S, phi = e1, e2
            T, Q = P1, -P2
            M = P + phi * Q
            out.update(conj1=P1, conj2=-P2)
            out["C_phi"] = capacity_ratio(P1, P11)
            out["inv_C_phi"] = P11 / P1
        elif rep_tag == "gibbs":
            T, phi = e1, e2
            S, Q = -P1, -P2
            M = P + T * S + phi * Q
            out.update(conj1=-P1, conj2=-P2)
            out["C_phi"] = -T * P11
            out["inv_C_phi"] = -1.0 / (T * P11)
        else:
            raise WrongRepresentation(rep_tag)
        out.update(T=T, phi=phi, S=S, Q=Q, M=M)
        out["H"] = M - phi * Q
        out["F"] = M - T * S
        out["G"] = M - T * S - phi * Q
    return out


def _eval(eq: FundamentalEquation, p: StatePoint):
    jet = eval_jet(eq, p)
    e1, e2 = p.arrays()
    return derived_quantities(eq.representation.tag, jet, e1, e2), jet


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def temperature(eq: FundamentalEquation, p: StatePoint):
    """T from the first law (returned verbatim in the Gibbs representation)."""
    if eq.representation.tag == "gibbs":
        eq.check_domain(p)
        return _out(p.arrays()[0])
    jet = eval_jet(eq, p)
    if eq.representation.tag == "entropy":
        if np.any(jet.c[1] == 0):
            raise DivisionByZeroJet("dS/dM vanishes")
        return _out(1.0 / jet.c[1])
    return _out(jet.c[1])


def heat_capacity(eq: FundamentalEquation, p: StatePoint, kind: CapacityKind | str):
    kind = CapacityKind(kind)
    tag = eq.representation.tag
    if tag not in CAPACITY_REPS[kind]:
        raise WrongRepresentation(f"{kind.value} is not defined in the {tag} representation")
    q, _ = _eval(eq, p)
    return _out(q[kind.value])


def potentials(eq: FundamentalEquation, p: StatePoint) -> dict:
    """M, H, F, G at p."""
    q, _ = _eval(eq, p)
    return {k: _out(q[k]) for k in ("M", "H", "F", "G")}


@dataclass(frozen=True)
class ThermoReport:
    point: StatePoint
    representation: str
    T: float
    conjugates: tuple
    C_Q: float | None
    C_phi: float | None
    C_S: float | None
    potentials: dict
    state: dict = field(default_factory=dict)  # S, Q, phi, M
    T_positive: bool = False
    stable: bool = False
    domain_ok: bool = True
    capacity_divergent: bool = False
    entropy_negative: bool = False

    def applicable_capacity(self):
        return self.C_Q if self.representation in ("mass", "entropy") else self.C_phi


def thermo_report(eq: FundamentalEquation, p: StatePoint) -> ThermoReport:
    q, _ = _eval(eq, p)
    tag = eq.representation.tag
    cap = APPLICABLE[tag].value
    c = _out(q[cap])
    get = lambda k: _out(q[k]) if k in q else None  # noqa: E731
    T = _out(q["T"])
    finite = np.isfinite(c)
    return ThermoReport(
        point=p, representation=tag, T=T,
        conjugates=(_out(q["conj1"]), _out(q["conj2"])),
        C_Q=get("C_Q"), C_phi=get("C_phi"), C_S=get("C_S"),
        potentials={k: _out(q[k]) for k in ("M", "H", "F", "G")},
        state={k: _out(q[k]) for k in ("S", "Q", "phi", "M")},
        T_positive=bool(np.all(T > 0)),
        stable=bool(np.all(finite & (c > 0))),
        domain_ok=True,
        capacity_divergent=bool(np.any(~finite)),
        entropy_negative=bool(np.any(np.asarray(q["S"]) < 0)),
    )
