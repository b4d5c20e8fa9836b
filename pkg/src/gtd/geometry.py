"""Equilibrium-manifold metrics and their scalar curvature.

Curvature sign: the returned scalar is the negative of the Ricci scalar in
the convention where the unit 2-sphere has R = +2, i.e. the unit sphere gives
R = -2. This is the convention in which the black-hole closed forms (e.g.
R(1,1) = -30.375 for the EMGB mass representation) are stated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateMetric, WrongRepresentation
from .fundeq import FundamentalEquation, StatePoint, eval_jet
from .jets import Jet2, derivative_jet

DEGENERATE_TOL = 1e-14
NULL_TOL = 1e-14


class MetricKind(str, Enum):
    GTD = "GTD"
    Weinhold = "Weinhold"
    Ruppeiner = "Ruppeiner"


@dataclass(frozen=True)
class Metric2:
    g11: object
    g12: object
    g22: object
    jets: tuple | None = None  # (j11, j12, j22) order-2 jets of the components
    scale: object = None  # reference component size for the degeneracy test

    @property
    def det(self):
        return self.g11 * self.g22 - self.g12 * self.g12

    @property
    def degenerate_mask(self):
        """Pointwise test |det g| < tol * scale^2 (or all components zero)."""
        det = np.asarray(self.det)
        scale = np.maximum.reduce([np.abs(self.g11), np.abs(self.g12), np.abs(self.g22)])
        if self.scale is not None:
            scale = np.maximum(scale, self.scale)
        with np.errstate(all="ignore"):
            return (np.abs(det) < DEGENERATE_TOL * scale**2) | (scale == 0)

    @property
    def signature(self) -> str:
        det = np.asarray(self.det)
        if np.any(self.degenerate_mask):
            return "Degenerate"
        if np.all(det > 0):
            return "Riemannian"
        if np.all(det < 0):
            return "Lorentzian"
        return "Mixed"

    @classmethod
    def constant(cls, g11, g12, g22):
        jets = tuple(Jet2.const(g) for g in (g11, g12, g22))
        return cls(g11, g12, g22, jets)

    @classmethod
    def from_jets(cls, j11, j12, j22):
        return cls(_v(j11.value), _v(j12.value), _v(j22.value), (j11, j12, j22))


def gtd_from_jet(jet, e1) -> Metric2:
    """n=2 GTD metric: Lambda_c = E1 Phi_1, g11 = -Lambda_c Phi_11, g22 = Lambda_c Phi_22."""
    p1 = derivative_jet(jet, 1, 0, cls=Jet2)
    p11 = derivative_jet(jet, 2, 0, cls=Jet2)
    p22 = derivative_jet(jet, 0, 2, cls=Jet2)
    lam = Jet2.var(1, e1) * p1
    j11 = -(lam * p11)
    j22 = lam * p22
    j12 = Jet2.const(np.zeros(j11.batch_shape))
    # components with the conformal factor replaced by |Phi|: when E1 Phi_1
    # cancels to roundoff (T = 0) all components vanish together
    ref = np.abs(jet.value) * np.maximum(np.abs(p11.value), np.abs(p22.value))
    return Metric2(_v(j11.value), _v(j12.value), _v(j22.value), (j11, j12, j22), _v(ref))


def hessian_from_jet(jet, sign: float = 1.0) -> Metric2:
    j11 = derivative_jet(jet, 2, 0, cls=Jet2) * sign
    j12 = derivative_jet(jet, 1, 1, cls=Jet2) * sign
    j22 = derivative_jet(jet, 0, 2, cls=Jet2) * sign
    return Metric2(_v(j11.value), _v(j12.value), _v(j22.value), (j11, j12, j22))


def _v(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def gtd_metric(eq: FundamentalEquation, p: StatePoint) -> Metric2:
    jet = eval_jet(eq, p)
    return gtd_from_jet(jet, p.arrays()[0])


def comparison_metric(eq: FundamentalEquation, p: StatePoint, kind: MetricKind | str) -> Metric2:
    """Weinhold (Hessian of M) or Ruppeiner (minus Hessian of S) metric."""
    kind = MetricKind(kind)
    tag = eq.representation.tag
    if kind is MetricKind.Weinhold:
        if tag != "mass":
            raise WrongRepresentation("Weinhold metric needs the mass representation")
        return hessian_from_jet(eval_jet(eq, p), 1.0)
    if kind is MetricKind.Ruppeiner:
        if tag != "entropy":
            raise WrongRepresentation("Ruppeiner metric needs the entropy representation")
        return hessian_from_jet(eval_jet(eq, p), -1.0)
    return gtd_metric(eq, p)


def curvature_arrays(m: Metric2):
    """Scalar curvature from component jets (batch; no degeneracy guard)."""
    j = m.jets
    if j is None:
        return np.zeros_like(np.asarray(m.g11, dtype=float))
    # g[a][b], dg[a][b][c] = d_c g_ab, ddg[a][b][c][d] = d_c d_d g_ab
    comps = {(0, 0): j[0], (0, 1): j[1], (1, 0): j[1], (1, 1): j[2]}
    g = [[comps[a, b].c[0] for b in range(2)] for a in range(2)]
    dg = [[[comps[a, b].c[1 + c] for c in range(2)] for b in range(2)] for a in range(2)]
    second = {(0, 0): (3, 2.0), (0, 1): (4, 1.0), (1, 0): (4, 1.0), (1, 1): (5, 2.0)}
    ddg = [[[[comps[a, b].c[second[c, d][0]] * second[c, d][1] for d in range(2)]
             for c in range(2)] for b in range(2)] for a in range(2)]
    with np.errstate(all="ignore"):
        det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        gi = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]]
        # d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
        dgi = [[[-sum(gi[k][a] * dg[a][b][mm] * gi[b][l] for a in range(2) for b in range(2))
                 for mm in range(2)] for l in range(2)] for k in range(2)]
        # first-kind symbols G_lij = (d_i g_lj + d_j g_li - d_l g_ij)/2 and derivatives
        G1 = [[[0.5 * (dg[l][jj][i] + dg[l][i][jj] - dg[i][jj][l]) for jj in range(2)]
               for i in range(2)] for l in range(2)]
        dG1 = [[[[0.5 * (ddg[l][jj][i][mm] + ddg[l][i][jj][mm] - ddg[i][jj][l][mm])
                  for mm in range(2)] for jj in range(2)] for i in range(2)] for l in range(2)]
        Gam = [[[sum(gi[k][l] * G1[l][i][jj] for l in range(2)) for jj in range(2)]
                for i in range(2)] for k in range(2)]
        dGam = [[[[sum(dgi[k][l][mm] * G1[l][i][jj] + gi[k][l] * dG1[l][i][jj][mm] for l in range(2))
                   for mm in range(2)] for jj in range(2)] for i in range(2)] for k in range(2)]

        def riem(a, b, c, d):
            r = dGam[a][d][b][c] - dGam[a][c][b][d]
            for e in range(2):
                r = r + Gam[a][c][e] * Gam[e][d][b] - Gam[a][d][e] * Gam[e][c][b]
            return r

        ric = [[sum(riem(a, b, a, d) for a in range(2)) for d in range(2)] for b in range(2)]
        R = sum(gi[b][d] * ric[b][d] for b in range(2) for d in range(2))
    return -R


def scalar_curvature(m: Metric2):
    if m.signature == "Degenerate":
        raise DegenerateMetric("metric determinant vanishes")
    R = np.asarray(curvature_arrays(m), dtype=float)
    return float(R) if R.ndim == 0 else R


def line_element(m: Metric2, dE) -> dict:
    dx, dy = dE
    ds2 = m.g11 * dx * dx + 2 * m.g12 * dx * dy + m.g22 * dy * dy
    ds2 = float(ds2)
    if abs(ds2) <= NULL_TOL:
        cls = "null"
    elif ds2 > 0:
        cls = "positive"
    else:
        cls = "negative"
    return {"ds2": ds2, "class": cls}


def probability_density(m: Metric2, dE) -> float:
    """sqrt|det g| / (2 pi) * exp(ds^2 / 2)."""
    det = abs(float(m.det))
    if det == 0.0:
        return 0.0
    ds2 = line_element(m, dE)["ds2"]
    return math.sqrt(det) / (2 * math.pi) * math.exp(0.5 * ds2)
