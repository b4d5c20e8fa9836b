"""Critical loci, stability maps, grid scans and the oracle harness.

All sweeps are evaluated as one numpy batch; refinement of individual
brackets uses scalar re-evaluation of the same indicator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.stats import qmc

from .errors import GTDError, ParamError, WrongRepresentation
from .fundeq import StatePoint, eval_jet_masked
from .geometry import curvature_arrays, gtd_from_jet, hessian_from_jet
from .models import VERIFIED, ModelBundle, emgb_area_entropy, make_model, model_catalog
from .thermo import APPLICABLE, derived_quantities

DEFAULT_SAMPLES = 2048
DEFAULT_TOL = 1e-12
COINCIDENCE_TOL = 1e-6
REFINED_RESIDUAL = 1e-9   # |f(x*)| <= REFINED_RESIDUAL * bracket scale
TOUCH_RESIDUAL = 1e-6
POLE_RESIDUAL = 1e-3
VERIFY_TOL = 1e-8
FLATNESS_TOL = 1e-6


# ------------------------------------------------------------------ specs

@dataclass(frozen=True)
class SweepSpec:
    """One swept coordinate, with the other inputs and parameters held fixed."""

    variable: str
    lo: float
    hi: float
    samples: int = DEFAULT_SAMPLES
    fixed: Mapping[str, float] = field(default_factory=dict)
    min_samples: int = 16

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise ParamError(f"sweep {self.variable}: need lo < hi, got {self.lo}:{self.hi}")
        if int(self.samples) != self.samples or self.samples < self.min_samples:
            raise ParamError(f"sweep {self.variable}: need at least {self.min_samples} samples")
        if self.variable in self.fixed:
            raise ParamError(f"{self.variable} is both swept and fixed")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.samples))


@dataclass(frozen=True)
class TransitionLocus:
    location: float
    indicator: str          # CapacityDivergence, ZeroTemperature, CurvatureSingularity, LnBreakdown, JetDegenerate
    kind: str | None        # capacity kind for CapacityDivergence
    side_signs: tuple | None
    refined: bool
    residual: float | None
    coincides_with: tuple = ()

    @property
    def label(self) -> str:
        return f"{self.indicator}({self.kind})" if self.kind else self.indicator

    def to_dict(self) -> dict:
        return {"location": self.location, "indicator": self.indicator, "kind": self.kind,
                "side_signs": list(self.side_signs) if self.side_signs else None,
                "refined": self.refined, "residual": self.residual,
                "coincides_with": list(self.coincides_with)}


@dataclass(frozen=True)
class StabilityCell:
    point: dict
    T_sign: str
    C_sign: str
    phase: str  # stable, unstable, unphysical, boundary

    def to_dict(self) -> dict:
        return {"point": dict(self.point), "T_sign": self.T_sign, "C_sign": self.C_sign,
                "phase": self.phase}


@dataclass(frozen=True)
class StabilityGrid:
    axes: tuple
    shape: tuple
    cells: tuple                 # row-major
    boundaries: tuple            # ((i, j), (i2, j2), phase_a, phase_b)

    def cell(self, *index) -> StabilityCell:
        return self.cells[int(np.ravel_multi_index(index, self.shape))]

    def phases(self) -> np.ndarray:
        return np.array([c.phase for c in self.cells], dtype=object).reshape(self.shape)


@dataclass(frozen=True)
class HelmholtzExtremum:
    location: float
    kind: str  # min / max
    coincides_with_CQ_divergence: bool

    def to_dict(self) -> dict:
        return {"location": self.location, "kind": self.kind,
                "coincidesWithCQDivergence": self.coincides_with_CQ_divergence}


# ---------------------------------------------------------- root finding

@dataclass(frozen=True)
class _Root:
    x: float
    refined: bool
    residual: float
    left: int
    right: int


def _sgn(v) -> int:
    return int(np.sign(v)) if np.isfinite(v) else 0


def _safe(f: Callable) -> Callable:
    def g(x):
        try:
            with np.errstate(all="ignore"):
                v = float(np.asarray(f(float(x)), dtype=float).reshape(-1)[0])
        except (GTDError, ArithmeticError, ValueError):
            return math.nan
        return v
    return g


def _brent(f, a, b, tol):
    fa, fb = f(a), f(b)
    if not (np.isfinite(fa) and np.isfinite(fb)) or fa * fb > 0:
        return None
    if fa == 0:
        return a
    if fb == 0:
        return b
    try:
        return brentq(f, a, b, xtol=max(tol * 1e-3, 1e-300), rtol=4 * np.finfo(float).eps,
                      maxiter=200)
    except (ValueError, RuntimeError):
        return None


def _roots_from_samples(xs, fs, f, tol, bridge=None) -> list:
    """Roots of f from samples fs = f(xs); f is the scalar evaluator used for refinement.

    ``bridge[k]`` allows a bracket to span non-finite samples k (evaluation
    failures inside the domain); other non-finite samples split the sweep.
    """
    xs = np.asarray(xs, float)
    fs = np.asarray(fs, float)
    fin = np.isfinite(fs)
    n = xs.size
    bridge = np.zeros(n, bool) if bridge is None else np.asarray(bridge, bool)
    roots = []

    idx = np.flatnonzero(fin)
    # consecutive finite samples, bridging in-domain evaluation failures
    pairs = [(k, m) for k, m in zip(idx[:-1], idx[1:]) if m == k + 1 or np.all(bridge[k + 1:m])]
    for k, m in pairs:
        fa, fb = fs[k], fs[m]
        if fa * fb < 0:
            x = _brent(f, xs[k], xs[m], tol)
            scale = max(abs(fa), abs(fb))
            if x is None:
                roots.append(_Root(0.5 * (xs[k] + xs[m]), False, math.nan, _sgn(fa), _sgn(fb)))
                continue
            res = abs(f(x))
            if not np.isfinite(res) or res > POLE_RESIDUAL * scale:
                continue  # sign change through a pole
            roots.append(_Root(float(x), bool(res <= REFINED_RESIDUAL * scale), res, _sgn(fa), _sgn(fb)))

    # exact zeros on the sampling grid
    pos = {k: i for i, k in enumerate(idx)}
    for k in np.flatnonzero(fin & (fs == 0)):
        i = pos[k]
        left = _sgn(fs[idx[i - 1]]) if i > 0 else 0
        right = _sgn(fs[idx[i + 1]]) if i + 1 < idx.size else 0
        roots.append(_Root(float(xs[k]), left * right < 0, 0.0, left, right))

    # even-order touches: interior local minima of |f| without a sign change
    for i in range(1, idx.size - 1):
        k0, k, k1 = idx[i - 1], idx[i], idx[i + 1]
        if k1 - k0 != 2:
            continue
        a0, a, a1 = fs[k0], fs[k], fs[k1]
        if a == 0 or a0 * a <= 0 or a * a1 <= 0:
            continue
        if not (abs(a) < abs(a0) and abs(a) <= abs(a1)):
            continue
        x = _touch(f, xs[k0], xs[k1], tol)
        if x is None:
            continue
        res = abs(f(x))
        if np.isfinite(res) and res <= TOUCH_RESIDUAL * max(abs(a0), abs(a1)):
            s = _sgn(a)
            roots.append(_Root(float(x), False, res, s, s))
    return _dedupe(roots, tol)


def _touch(f, a, b, tol):
    def df(x):
        h = 1e-6 * max(1.0, abs(x))
        return (f(x + h) - f(x - h)) / (2 * h)
    return _brent(df, a, b, tol)


def _dedupe(roots, tol):
    roots = sorted(roots, key=lambda r: r.x)
    out = []
    for r in roots:
        if out and abs(r.x - out[-1].x) <= 10 * tol:
            if r.refined and not out[-1].refined:
                out[-1] = r
            continue
        out.append(r)
    return out


def _vector_eval(f, xs):
    try:
        with np.errstate(all="ignore"):
            fs = np.asarray(f(xs), dtype=float)
        if fs.shape == xs.shape:
            return fs
    except (GTDError, ArithmeticError, ValueError, TypeError):
        pass
    g = _safe(f)
    return np.array([g(x) for x in xs])


def find_roots(f: Callable, lo: float, hi: float, tol: float = DEFAULT_TOL,
               samples: int = DEFAULT_SAMPLES, with_touches: bool = False) -> list:
    """All sign-change roots of f on [lo, hi] at the sampling resolution.

    ``f`` may be vectorized; points where it fails or is non-finite are
    skipped.  With ``with_touches`` even-order roots are included too.
    """
    if not lo < hi:
        raise ParamError("find_roots needs lo < hi")
    xs = np.linspace(lo, hi, int(samples))
    roots = _roots_from_samples(xs, _vector_eval(f, xs), _safe(f), tol)
    return [r.x for r in roots if with_touches or r.left * r.right < 0 or r.refined]


# ----------------------------------------------------------- evaluation

def _resolve(bundle: ModelBundle, values: Mapping[str, object]) -> tuple:
    """(StatePoint, resolved_ok) for possibly out-of-domain batch inputs."""
    try:
        p = bundle.resolve(values)
        e1, e2 = p.arrays()
        return StatePoint(e1, e2), np.ones(e1.shape, bool)
    except ParamError:
        raise
    except GTDError:
        arrays = np.broadcast_arrays(*(np.asarray(v, float) for v in values.values()))
        names = list(values)
        shape = arrays[0].shape
        e1 = np.full(shape, np.nan)
        e2 = np.full(shape, np.nan)
        good = np.zeros(shape, bool)
        for k in np.ndindex(shape):
            try:
                q = bundle.resolve({n: a[k] for n, a in zip(names, arrays)})
            except ParamError:
                raise
            except GTDError:
                continue
            e1[k], e2[k] = (float(v) for v in q.arrays())
            good[k] = True
        return StatePoint(e1, e2), good


def evaluate_state(bundle: ModelBundle, values: Mapping[str, object]) -> dict:
    """Batch evaluation of every quantity at named inputs (never raises on domain).

    Returns the derived quantities plus e1, e2, g11, g22, detg, R and the
    masks ``in_domain`` (predicate holds) and ``ok`` (jet evaluated).
    """
    p, resolved = _resolve(bundle, values)
    e1, e2 = p.arrays()
    in_domain = bundle.eq.domain_mask(p) & resolved
    jet, ok = eval_jet_masked(bundle.eq, p)
    ok &= in_domain
    q = derived_quantities(bundle.eq.representation.tag, jet, e1, e2)
    metric = gtd_from_jet(jet, e1)
    with np.errstate(all="ignore"):
        R = np.asarray(curvature_arrays(metric), dtype=float)
        q.update(e1=e1, e2=e2, g11=np.asarray(metric.g11, float), g22=np.asarray(metric.g22, float),
                 R=R)
        q["detg"] = q["g11"] * q["g22"]
    q["null_metric"] = (q["g11"] == 0) & (q["g22"] == 0) & ok
    q["in_domain"] = in_domain
    q["ok"] = ok
    q["jet"] = jet
    return q


def _ln_indicator(bundle):
    return bundle.id.family.value == "eymgb"


def indicators(bundle: ModelBundle, q: Mapping) -> dict:
    """Singular indicators: functions whose roots are the critical loci."""
    tag = bundle.eq.representation.tag
    cap = APPLICABLE[tag].value
    out = {("CapacityDivergence", cap): q["inv_" + cap], ("ZeroTemperature", None): q["T"]}
    if "inv_C_S" in q:
        key = ("LnBreakdown", None) if _ln_indicator(bundle) else ("CapacityDivergence", "C_S")
        out[key] = q["inv_C_S"]
    elif _ln_indicator(bundle):
        with np.errstate(all="ignore"):
            out[("LnBreakdown", None)] = np.log(q["e1"])
    R = np.asarray(q["R"], float)
    with np.errstate(all="ignore"):
        # an identically vanishing metric (T = 0 exactly) has no finite curvature
        sing = np.isinf(R) | np.broadcast_to(q.get("null_metric", False), R.shape)
        out[("CurvatureSingularity", None)] = np.where(sing, 0.0, 1.0 / R)
    return out


def _sweep_values(sweep: SweepSpec, x):
    vals = {k: v for k, v in sweep.fixed.items()}
    vals[sweep.variable] = x
    return vals


def _split_fixed(bundle: ModelBundle, sweep: SweepSpec) -> SweepSpec:
    """Reject model parameters in ``fixed`` that disagree with the bundle."""
    for k in sweep.fixed:
        if k in bundle.params:
            raise ParamError(f"{k} is a model parameter; pass it to make_model")
    return sweep


# ------------------------------------------------------------ transitions

def locate_transitions(bundle: ModelBundle, sweep: SweepSpec, tol: float = DEFAULT_TOL) -> list:
    """Critical loci along a sweep, cross-labelled where indicators coincide."""
    _split_fixed(bundle, sweep)
    xs = sweep.points
    q = evaluate_state(bundle, _sweep_values(sweep, xs))
    ind = indicators(bundle, q)
    bridge = q["in_domain"] & ~q["ok"]

    cache: dict = {}

    def point(x):
        if x not in cache:
            cache[x] = indicators(bundle, evaluate_state(bundle, _sweep_values(sweep, np.array([x]))))
        return cache[x]

    loci = []
    for key, fs in ind.items():
        def f(x, key=key):
            return point(float(x))[key][0]
        for r in _roots_from_samples(xs, fs, _safe(f), tol, bridge):
            loci.append(TransitionLocus(
                location=r.x, indicator=key[0], kind=key[1], side_signs=(r.left, r.right),
                refined=r.refined, residual=None if math.isnan(r.residual) else r.residual))

    for start, stop in _runs(bridge):
        if start == 0 or stop == xs.size:
            continue
        loci.append(TransitionLocus(float(0.5 * (xs[start] + xs[stop - 1])), "JetDegenerate",
                                    None, None, False, None))

    labelled = []
    for L in loci:
        others = sorted({M.label for M in loci if M is not L and M.label != L.label
                         and abs(M.location - L.location) <= COINCIDENCE_TOL})
        labelled.append(TransitionLocus(L.location, L.indicator, L.kind, L.side_signs, L.refined,
                                        L.residual, tuple(others)))
    labelled.sort(key=lambda L: (L.location, L.label))
    return labelled


def _runs(mask):
    mask = np.asarray(mask, bool)
    k, n = 0, mask.size
    while k < n:
        if mask[k]:
            s = k
            while k < n and mask[k]:
                k += 1
            yield s, k
        else:
            k += 1


def locus_consistency(loci: Sequence[TransitionLocus], tol: float = COINCIDENCE_TOL) -> dict:
    """Compare curvature singularities with the union of the other loci."""
    curv = [L.location for L in loci if L.indicator == "CurvatureSingularity"]
    rest = [L.location for L in loci
            if L.indicator in ("CapacityDivergence", "ZeroTemperature", "LnBreakdown")]
    lone_curv = [x for x in curv if not any(abs(x - y) <= tol for y in rest)]
    lone_rest = [y for y in rest if not any(abs(x - y) <= tol for x in curv)]
    return {"curvature": curv, "thermodynamic": sorted(set(rest)),
            "unmatched_curvature": lone_curv, "unmatched_thermodynamic": lone_rest,
            "holds": not lone_curv and not lone_rest}


# -------------------------------------------------------------- Helmholtz

def helmholtz_extrema(bundle: ModelBundle, sweep: SweepSpec, tol: float = DEFAULT_TOL) -> list:
    """Extrema of F = M - TS along a sweep (mass representation)."""
    if bundle.eq.representation.tag != "mass":
        raise WrongRepresentation("Helmholtz extrema need the mass representation")
    _split_fixed(bundle, sweep)

    def parts(x):
        q = evaluate_state(bundle, _sweep_values(sweep, x))
        c = q["jet"].c
        with np.errstate(all="ignore"):
            # F_S = -S M_SS, and at M_SS = 0: F_SS = -S M_SSS
            return -q["e1"] * 2 * c[3], -q["e1"] * 6 * c[6], q["inv_C_Q"]

    xs = sweep.points
    fS, _, invc = parts(xs)
    bridge = None

    def scalar(i):
        return _safe(lambda x: parts(np.array([x]))[i][0])

    cq = [r.x for r in _roots_from_samples(xs, invc, scalar(2), tol, bridge) if r.left * r.right < 0]
    out = []
    for r in _roots_from_samples(xs, fS, scalar(0), tol, bridge):
        if r.left * r.right >= 0:
            continue
        fss = float(parts(np.array([r.x]))[1][0])
        kind = "min" if fss > 0 else "max"
        near = any(abs(r.x - y) <= COINCIDENCE_TOL for y in cq)
        out.append(HelmholtzExtremum(r.x, kind, near))
    return out


# -------------------------------------------------------------- stability

def _sign_str(v) -> str:
    if not np.isfinite(v) and not np.isinf(v):
        return "?"
    return "+" if v > 0 else "-" if v < 0 else "0"


def stability_scan(bundle: ModelBundle, first: SweepSpec, second: SweepSpec | None = None) -> StabilityGrid:
    """Phase classification over a line or a rectangle of states."""
    axes = (first,) if second is None else (first, second)
    fixed = dict(first.fixed)
    if second is not None:
        fixed.update(second.fixed)
        fixed.pop(first.variable, None)
        fixed.pop(second.variable, None)
    grids = np.meshgrid(*(a.points for a in axes), indexing="ij")
    values = dict(fixed)
    for a, g in zip(axes, grids):
        values[a.variable] = g
    q = evaluate_state(bundle, values)
    cap = APPLICABLE[bundle.eq.representation.tag].value
    T = np.broadcast_to(np.asarray(q["T"], float), grids[0].shape)
    C = np.broadcast_to(np.asarray(q[cap], float), grids[0].shape)
    ok = q["ok"]
    cells = []
    for k in np.ndindex(grids[0].shape):
        pt = {a.variable: float(g[k]) for a, g in zip(axes, grids)}
        ts, cs = _sign_str(T[k]), _sign_str(C[k])
        if not ok[k] or ts == "?" or cs == "?":
            phase = "unphysical"
        elif ts == "0" or cs == "0":
            phase = "boundary"
        elif ts == "-":
            phase = "unphysical"
        else:
            phase = "stable" if cs == "+" else "unstable"
        cells.append(StabilityCell(pt, ts, cs, phase))
    shape = grids[0].shape
    phases = np.array([c.phase for c in cells], dtype=object).reshape(shape)
    bounds = []
    for k in np.ndindex(shape):
        for d in range(len(shape)):
            n = list(k)
            n[d] += 1
            if n[d] < shape[d] and phases[k] != phases[tuple(n)]:
                bounds.append((k, tuple(n), phases[k], phases[tuple(n)]))
    return StabilityGrid(axes=axes, shape=shape, cells=tuple(cells), boundaries=tuple(bounds))


# ------------------------------------------------------------------ scans

SCAN_COLUMNS = ("model", "ensemble", "entropy", "e1", "e2", "T", "C_Q", "C_phi", "C_S", "M", "H",
                "F", "G", "g11", "g22", "detg", "R", "T_positive", "stable", "domain_ok")
_NUMERIC = ("e1", "e2", "T", "C_Q", "C_phi", "C_S", "M", "H", "F", "G", "g11", "g22", "detg", "R")


def grid_scan(bundle: ModelBundle, axes: Sequence[tuple], fixed: Mapping[str, float]) -> list:
    """Rows (dicts keyed by SCAN_COLUMNS) over a row-major grid.

    ``axes`` holds (name, lo, hi, n) tuples for one or two inputs.  Absent
    quantities are None; NaN is never returned (such points get
    domain_ok=False and None in the affected columns).
    """
    if not 1 <= len(axes) <= 2:
        raise ParamError("a scan grid has one or two axes")
    for name, lo, hi, n in axes:
        if not lo < hi or int(n) < 2:
            raise ParamError(f"grid {name}: need lo < hi and n >= 2")
        if name in fixed:
            raise ParamError(f"{name} is both gridded and fixed")
    grids = np.meshgrid(*(np.linspace(lo, hi, int(n)) for _, lo, hi, n in axes), indexing="ij")
    values = dict(fixed)
    for (name, *_), g in zip(axes, grids):
        values[name] = g.ravel()
    q = evaluate_state(bundle, values)
    return [scan_row(bundle, q, i) for i in range(grids[0].size)]


def scan_row(bundle: ModelBundle, q: Mapping, i) -> dict:
    """One SCAN_COLUMNS row from flat batch quantities ``q`` at index i."""
    mid = bundle.id
    cap = APPLICABLE[bundle.eq.representation.tag].value
    row = {"model": mid.family.value, "ensemble": mid.ensemble.value, "entropy": mid.entropy.value}
    good = bool(np.asarray(q["ok"]).reshape(-1)[i])
    for k in _NUMERIC:
        v = None
        if k in q:
            arr = np.asarray(q[k], float)
            v = float(arr.reshape(-1)[i] if arr.ndim else arr)
            if math.isnan(v):
                good, v = False, None
        row[k] = v
    row["T_positive"] = bool(good and row["T"] is not None and row["T"] > 0)
    row["stable"] = bool(row["T_positive"] and row[cap] is not None and row[cap] > 0)
    row["domain_ok"] = good
    return row


# ----------------------------------------------------------- verification

def _box(**ranges):
    """Map the unit square onto named input ranges."""
    names = list(ranges)

    def f(u):
        return {n: lo + (hi - lo) * u[:, i] for i, (n, (lo, hi)) in enumerate(ranges.items())}
    f.names = names
    return f


def _emgb_cond(v):
    a = 3 * v["S"] ** (4 / 3)
    return (a > 1.1 * v["Q"] ** 2) & (np.abs(a - 5 * v["Q"] ** 2) > 0.1)


def _away_from_one(key):
    return lambda v: np.abs(np.log(v[key])) > 0.05


def _eymgb_entropy_box(u):
    Q = -1.5 + 3 * u[:, 0]
    return {"Q": Q, "r": np.abs(Q) + 0.05 + 3 * u[:, 1]}


VERIFY_BOXES = {
    "emgb/area/mass": (_box(S=(0.2, 5.0), Q=(-2.0, 2.0)), _emgb_cond),
    "emgb/area/enthalpy": (_box(S=(0.2, 5.0), phi=(-1.0, 1.0)), None),
    "emgb/area/gibbs": (_box(T=(0.3, 3.0), phi=(0.05, 1.1)),
                        lambda v: (np.abs(4 - 15 * v["phi"] ** 2) > 0.1)),
    "emgb/modified/entropy": (_box(M=(0.5, 3.0), q=(-0.95, 0.95)), None),
    "emgb-lambda/area/mass": (_box(S=(0.2, 5.0), Q=(-2.0, 2.0)), None),
    "emgb-lambda/area/enthalpy": (_box(S=(0.2, 5.0), phi=(-1.0, 1.0)), None),
    "emgb-lambda/modified/mass": (_box(r=(0.5, 3.0), Q=(-1.5, 1.5)), None),
    "emgb-lambda/modified/entropy": (_box(r=(0.8, 3.0), Q=(-1.0, 1.0)), None),
    "eymgb/area/mass": (_box(S=(0.2, 20.0), Q=(-2.0, 2.0)), _away_from_one("S")),
    "eymgb/area/enthalpy": (_box(S=(0.2, 20.0), phi=(-1.5, 1.5)), _away_from_one("S")),
    "eymgb/modified/mass": (_box(r=(0.3, 4.0), Q=(-2.0, 2.0)), _away_from_one("r")),
    "eymgb/modified/entropy": (_eymgb_entropy_box, None),
}

# figure sweeps: (variable, lo, hi, fixed inputs, parameters)
FIGURE_SWEEPS = {
    "emgb/area/mass": ("S", 0.2, 5.0, {"Q": 1.0}, {}),
    "emgb/area/enthalpy": ("S", 0.2, 5.0, {"phi": 0.5}, {}),
    "emgb/area/gibbs": ("phi", 0.0, 1.5, {"T": 1.0}, {}),
    "emgb/modified/entropy": ("q", 0.0, 0.999, {"M": 1.0}, {"alpha": -0.1}),
    "emgb-lambda/area/mass": ("S", 0.01, 10.0, {"Q": 0.5}, {"Lambda": -1.0}),
    "emgb-lambda/area/enthalpy": ("S", 0.05, 5.0, {"phi": 1.0}, {"Lambda": -1.0}),
    "emgb-lambda/modified/mass": ("r", 0.5, 3.0, {"Q": 1.0}, {"Lambda": -1.0, "alpha": 0.25}),
    "emgb-lambda/modified/entropy": ("r", 0.75, 3.0, {"Q": 1.0}, {"Lambda": -1.0, "alpha": 0.25}),
    "eymgb/area/mass": ("Q", -3.0, 3.0, {"S": 10.0}, {}),
    "eymgb/area/enthalpy": ("S", 0.2, 20.0, {"phi": 1.0}, {}),
    "eymgb/modified/mass": ("r", 0.5, 4.0, {"Q": 1.0}, {"alpha": 1.0}),
    "eymgb/modified/entropy": ("r", 1.02, 4.0, {"Q": 1.0}, {"alpha": 1.0}),
}


def figure_sweep(model_id: str, samples: int = DEFAULT_SAMPLES) -> tuple:
    """(bundle, sweep) reproducing the reference figure for a catalog model."""
    var, lo, hi, fixed, params = FIGURE_SWEEPS[model_id]
    return make_model(model_id, params), SweepSpec(var, lo, hi, samples, dict(fixed))


@dataclass(frozen=True)
class OracleResult:
    name: str
    status: str
    quantity: str
    n: int
    max_rel_error: float | None = None
    factor_median: float | None = None
    factor_spread: float | None = None
    factor_constant: bool | None = None
    passed: bool | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ClaimCheck:
    name: str
    passed: bool
    detail: dict
    gate: bool = False  # claim checks do not fail verification

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "gate": self.gate,
                "status": "ok" if self.passed else "paper-claim failure", "detail": self.detail}


@dataclass(frozen=True)
class VerificationReport:
    model: str
    params: dict
    samples: int
    seed: int
    oracles: tuple
    checks: tuple

    @property
    def passed(self) -> bool:
        return (all(o.passed for o in self.oracles if o.status == VERIFIED)
                and all(c.passed for c in self.checks if c.gate))

    def to_dict(self) -> dict:
        return {"model": self.model, "params": dict(self.params), "samples": self.samples,
                "seed": self.seed, "passed": self.passed,
                "oracles": [o.to_dict() for o in self.oracles],
                "checks": [c.to_dict() for c in self.checks]}


def sample_inputs(model_id: str, n: int, seed: int, bundle: ModelBundle | None = None) -> dict:
    """Deterministic quasi-random in-domain inputs for a catalog model."""
    box, cond = VERIFY_BOXES[model_id]
    sampler = qmc.Halton(d=2, scramble=True, seed=seed)
    u = sampler.random(max(8 * n, 64))
    vals = box(u)
    keep = np.ones(u.shape[0], bool)
    if cond is not None:
        with np.errstate(all="ignore"):
            keep &= np.asarray(cond(vals), bool)
    if bundle is not None:
        keep &= evaluate_state(bundle, vals)["ok"]
    idx = np.flatnonzero(keep)[:n]
    return {k: v[idx] for k, v in vals.items()}


def _rel_err(p, o):
    p = np.asarray(p, float)
    o = np.asarray(o, float)
    with np.errstate(all="ignore"):
        same_inf = np.isinf(p) & np.isinf(o) & (np.sign(p) == np.sign(o))
        err = np.abs(p - o) / np.maximum(np.abs(o), 1e-300)
    return np.where(same_inf, 0.0, np.where(np.isnan(err), np.inf, err))


def verify_model(bundle: ModelBundle, n_samples: int = 100, seed: int = 0,
                 tol: float = VERIFY_TOL) -> VerificationReport:
    """Compare the jet pipeline against every closed-form oracle of a model."""
    mid = str(bundle.id)
    vals = sample_inputs(mid, n_samples, seed, bundle)
    q = evaluate_state(bundle, vals)
    p = StatePoint(q["e1"], q["e2"])
    v = bundle.variables(p)
    results = []
    for name, o in bundle.oracles.items():
        with np.errstate(all="ignore"):
            ov = np.asarray(o.fn(v), float)
        pv = np.broadcast_to(np.asarray(q[o.quantity], float), ov.shape)
        if o.status == VERIFIED:
            err = _rel_err(pv, ov)
            m = float(np.max(err)) if err.size else 0.0
            results.append(OracleResult(name, o.status, o.quantity, int(err.size), max_rel_error=m,
                                        passed=bool(m < tol), note=o.note))
        else:
            with np.errstate(all="ignore"):
                fac = ov / pv
            fac = fac[np.isfinite(fac)]
            med = float(np.median(fac)) if fac.size else math.nan
            spread = float((fac.max() - fac.min()) / abs(med)) if fac.size and med else math.nan
            results.append(OracleResult(
                name, o.status, o.quantity, int(fac.size), factor_median=med,
                factor_spread=spread, factor_constant=bool(spread < 1e-6), note=o.note))
    checks = [locus_check(mid, bundle.params)]
    if mid == "emgb/area/gibbs":
        checks.append(gibbs_locus_check())
    if mid == "emgb/area/mass":
        checks.append(ruppeiner_flatness_check(50, seed))
    checks = [c for c in checks if c is not None]
    return VerificationReport(mid, dict(bundle.params), int(np.size(q["e1"])), seed,
                              tuple(results), tuple(checks))


def locus_check(model_id: str, params: Mapping | None = None, samples: int = DEFAULT_SAMPLES):
    """Curvature singularities vs thermodynamic loci along the figure sweep."""
    if model_id not in FIGURE_SWEEPS or model_id == "emgb/area/gibbs":
        return None
    var, lo, hi, fixed, ref = FIGURE_SWEEPS[model_id]
    bundle = make_model(model_id, ref)
    loci = locate_transitions(bundle, SweepSpec(var, lo, hi, samples, dict(fixed)))
    res = locus_consistency(loci)
    detail = {"sweep": {"variable": var, "range": [lo, hi], "fixed": dict(fixed), "params": dict(ref)}}
    detail.update({k: v for k, v in res.items() if k != "holds"})
    return ClaimCheck("locus coincidence", res["holds"], detail)


GIBBS_LOCI = (math.sqrt(4 / 15), 2 / math.sqrt(3))


def gibbs_locus_check(T: float = 1.0, tol: float = 1e-9) -> ClaimCheck:
    bundle = make_model("emgb/area/gibbs")
    loci = locate_transitions(bundle, SweepSpec("phi", 0.0, 1.5, DEFAULT_SAMPLES, {"T": T}))
    found = [L.location for L in loci if L.indicator == "CurvatureSingularity"]
    errs = [min((abs(x - e) for x in found), default=math.inf) for e in GIBBS_LOCI]
    ok = all(e <= tol for e in errs) and len(found) == len(GIBBS_LOCI)
    return ClaimCheck("Gibbs curvature loci phi^2 = 4/15, 4/3", ok,
                      {"expected": list(GIBBS_LOCI), "found": found, "errors": errs}, gate=True)


def ruppeiner_flatness_check(n: int = 50, seed: int = 0) -> ClaimCheck:
    """|R| of the Ruppeiner metric -Hess S(M, Q) for the EMGB area entropy."""
    eq = emgb_area_entropy()
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    M = 0.5 + 2.5 * u[:, 0]
    q = -0.95 + 1.9 * u[:, 1]
    Q = math.sqrt(3) / 2 * M * q
    jet, ok = eval_jet_masked(eq, StatePoint(M, Q))
    with np.errstate(all="ignore"):
        T = 1.0 / jet.c[1]
        R = np.asarray(curvature_arrays(hessian_from_jet(jet, -1.0)), float)
    sel = ok & (T > 0)
    Rm = float(np.max(np.abs(R[sel]))) if np.any(sel) else math.nan
    return ClaimCheck("Ruppeiner metric flat (EMGB area entropy)", bool(Rm < FLATNESS_TOL),
                      {"points": int(sel.sum()), "max_abs_R": Rm, "threshold": FLATNESS_TOL})


def reference_bundles() -> list:
    """Every catalog model built with its reference parameters."""
    return [make_model(e.id, dict(e.reference)) for e in model_catalog()]


def verify_all(n_samples: int = 100, seed: int = 0, family: str | None = None) -> list:
    out = []
    for b in reference_bundles():
        if family is None or b.id.family.value == family:
            out.append(verify_model(b, n_samples, seed))
    return out
