import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtd.analysis import reference_bundles, sample_inputs, verify_model
from gtd.errors import DomainError, ParamError, UnknownOracle
from gtd.fundeq import StatePoint, eval_jet
from gtd.models import (PAPER_ONLY, VERIFIED, ModelId, catalog_entry, lambda_r_min, make_model,
                        model_catalog, oracle_eval)

# -------------------------------------------------------------------- catalog

CATALOG_IDS = [str(e.id) for e in model_catalog()]


def test_catalog_listing_is_stable():
    assert CATALOG_IDS == [str(e.id) for e in model_catalog()]
    assert len(CATALOG_IDS) == len(set(CATALOG_IDS)) == 12


@pytest.mark.parametrize("mid", ["emgb/area/gibbs", "emgb-lambda/modified/entropy",
                                 "emgb/modified/entropy", "eymgb/area/enthalpy"])
def test_catalog_contains(mid):
    assert mid in CATALOG_IDS


@pytest.mark.parametrize("mid", ["eymgb/modified/gibbs", "emgb/modified/mass",
                                 "emgb-lambda/area/gibbs", "eymgb/area/gibbs"])
def test_catalog_excludes(mid):
    assert mid not in CATALOG_IDS
    with pytest.raises(ParamError):
        make_model(mid)


def test_catalog_figures_and_schemas():
    e = catalog_entry("emgb-lambda/area/mass")
    assert any("Fig. 9" in f for f in e.figures)
    assert {p.name for p in e.params} == {"Lambda", "alpha"}


def test_model_id_round_trip():
    mid = ModelId.of("eymgb", "modified", "entropy")
    assert ModelId.parse(str(mid)) == mid
    with pytest.raises(ParamError):
        ModelId.parse("emgb/area")
    with pytest.raises(ParamError):
        ModelId.of("kerr", "area", "mass")


# ------------------------------------------------------------------ make_model

def test_emgb_mass_bundle():
    b = make_model("emgb/area/mass")
    assert b.coords == ("S", "Q")
    assert set(b.oracles) == {"T", "phi", "C_Q", "g11", "g22", "R"}
    assert set(b.oracle_status.values()) == {VERIFIED}


def test_eymgb_modified_entropy_bundle():
    b = make_model("eymgb/modified/entropy", {"alpha": 1.0})
    assert b.eq.kind == "parametric"
    # C_Q denominator -r^4 + (2 alpha + 3 Q^2) r^2 + 2 Q^2 alpha vanishes at the quartic root
    r2 = 1.5 + 1.0 + 0.5 * math.sqrt(9 + 20 + 4)
    p = b.resolve({"r": math.sqrt(r2) * (1 + 1e-7), "Q": 1.0})
    assert abs(oracle_eval(b, "C_Q", p)) > 1e5


@pytest.mark.parametrize("mid,params", [
    ("emgb-lambda/area/mass", {"Lambda": 1.0}),
    ("emgb-lambda/area/mass", {}),
    ("emgb-lambda/modified/mass", {"Lambda": -1.0, "alpha": -0.5}),
    ("emgb/modified/entropy", {"alpha": 0.1}),
    ("emgb/modified/entropy", {}),
    ("emgb/area/mass", {"alpha": 1.0}),
    ("eymgb/modified/mass", {"alpha": "x"}),
    ("emgb-lambda/area/mass", {"Lambda": float("nan")}),
])
def test_param_errors(mid, params):
    with pytest.raises(ParamError):
        make_model(mid, params)


def test_negative_temperature_is_in_domain():
    b = make_model("emgb/area/mass")
    p = StatePoint(0.2, 1.0)  # 3 S^(4/3) < Q^2
    assert oracle_eval(b, "T", p) < 0
    eval_jet(b.eq, p)  # no DomainError


def test_resolver_errors():
    b = make_model("eymgb/modified/mass", {"alpha": 1.0})
    with pytest.raises(ParamError):
        b.resolve({"r": 1.0})
    with pytest.raises(ParamError):
        b.resolve({"r": 1.0, "S": 2.0, "Q": 1.0})
    with pytest.raises(DomainError):
        b.resolve({"r": -1.0, "Q": 1.0})
    with pytest.raises(ParamError):
        b.resolve({"r": 1.0, "Q": 1.0, "phi": 0.0})


# ------------------------------------------------------------------- oracles

def test_emgb_capacity_oracle():
    assert oracle_eval(make_model("emgb/area/mass"), "C_Q", StatePoint(1.0, 1.0)) == pytest.approx(3.0)


def test_emgb_curvature_oracle_uncharged():
    assert oracle_eval(make_model("emgb/area/mass"), "R", StatePoint(1.0, 0.0)) == pytest.approx(-9.0)


def test_emgb_modified_capacity_oracle():
    b = make_model("emgb/modified/entropy", {"alpha": -0.25})
    assert oracle_eval(b, "C_Q", b.resolve({"M": 1.0, "q": 0.0})) == pytest.approx(-0.5)


def test_unknown_oracle():
    with pytest.raises(UnknownOracle):
        oracle_eval(make_model("emgb/area/mass"), "C_phi", StatePoint(1.0, 1.0))


def test_oracle_domain():
    with pytest.raises(DomainError):
        oracle_eval(make_model("emgb/area/mass"), "T", StatePoint(-1.0, 1.0))


def test_oracle_signed_infinity():
    b = make_model("emgb/area/mass")
    S = (5 / 3) ** 0.75
    v = oracle_eval(b, "C_Q", StatePoint(S, 1.0))
    assert math.isinf(v) or abs(v) > 1e12


@pytest.mark.parametrize("bundle", reference_bundles(), ids=CATALOG_IDS)
def test_verified_oracles_match_pipeline(bundle):
    rep = verify_model(bundle, 100, seed=3)
    assert rep.samples >= 50
    for o in rep.oracles:
        if o.status == VERIFIED:
            assert o.max_rel_error < 1e-8, (o.name, o.max_rel_error)
        else:
            assert o.status == PAPER_ONLY
            assert o.factor_median is not None and np.isfinite(o.factor_median)


@pytest.mark.parametrize("bundle", reference_bundles(), ids=CATALOG_IDS)
def test_temperature_oracle_is_first_derivative(bundle):
    if "T" not in bundle.oracles or bundle.eq.representation.tag == "gibbs":
        pytest.skip("no temperature oracle")
    vals = sample_inputs(str(bundle.id), 30, seed=5, bundle=bundle)
    key = next(iter(vals))
    for k in range(len(vals[key])):
        p = bundle.resolve({n: float(v[k]) for n, v in vals.items()})
        d = eval_jet(bundle.eq, p).coeff(1, 0)
        T = 1 / d if bundle.eq.representation.tag == "entropy" else d
        assert T == pytest.approx(oracle_eval(bundle, "T", p), rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 50.0), st.floats(-60.0, 60.0))
def test_specific_charge_bounded(M, Q):
    b = make_model("emgb/modified/entropy", {"alpha": -0.1})
    p = StatePoint(M, Q)
    if b.eq.domain_mask(p):
        assert abs(b.variables(p)["q"]) <= 1.0


def test_lambda_stability_theorem():
    rng = np.random.default_rng(11)
    n = 0
    while n < 500:
        Lam = -rng.uniform(0.1, 3.0)
        alpha = 1 / (2 * abs(Lam)) + rng.uniform(0.0, 2.0)
        Q = rng.uniform(-2.0, 2.0)
        r = rng.uniform(0.05, 5.0)
        b = make_model("emgb-lambda/modified/mass", {"Lambda": Lam, "alpha": alpha})
        p = b.resolve({"r": r, "Q": Q})
        if oracle_eval(b, "T", p) <= 0:
            continue
        n += 1
        assert oracle_eval(b, "C_Q", p) > 0, (Lam, alpha, Q, r)


def test_minimal_radius():
    assert lambda_r_min(1.0, -1.0) == pytest.approx(0.72951, abs=1e-4)
    r = lambda_r_min(1.0, -1.0)
    assert r**6 + 3 * r**4 - 1 == pytest.approx(0.0, abs=1e-12)
