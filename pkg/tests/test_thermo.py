import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtd.errors import DivisionByZeroJet, DomainError, WrongRepresentation
from gtd.fundeq import ENTROPY, ParametricEquation, StatePoint, eval_jet, legendre_transform
from gtd.models import make_model
from gtd.thermo import capacity_ratio, heat_capacity, potentials, temperature, thermo_report

EMGB = make_model("emgb/area/mass").eq
EMGB_H = make_model("emgb/area/enthalpy").eq


def test_emgb_temperature():
    assert temperature(EMGB, StatePoint(1.0, 1.0)) == pytest.approx(4 / 9, rel=1e-15)


def test_emgb_modified_temperature():
    b = make_model("emgb/modified/entropy", {"alpha": -0.1})
    assert temperature(b.eq, b.resolve({"M": 1.0, "q": 0.0})) == pytest.approx(5 / 6, rel=1e-12)


def test_eymgb_modified_temperature_and_capacity():
    b = make_model("eymgb/modified/entropy", {"alpha": 1.0})
    p = b.resolve({"r": 2.0, "Q": 1.0})
    assert temperature(b.eq, p) == pytest.approx(1 / 6, rel=1e-10)
    assert heat_capacity(b.eq, p, "C_Q") == pytest.approx(108.0, rel=1e-8)
    bm = make_model("eymgb/modified/mass", {"alpha": 1.0})
    pm = bm.resolve({"r": 2.0, "Q": 1.0})
    assert heat_capacity(bm.eq, pm, "C_Q") == pytest.approx(108.0, rel=1e-8)


def test_gibbs_temperature_is_coordinate():
    eq = make_model("emgb/area/gibbs").eq
    assert temperature(eq, StatePoint(0.7, 0.2)) == 0.7


def test_emgb_capacities():
    p = StatePoint(1.0, 1.0)
    assert heat_capacity(EMGB, p, "C_Q") == pytest.approx(3.0, rel=1e-14)
    assert heat_capacity(EMGB, p, "C_S") == pytest.approx(1.5, rel=1e-14)


@pytest.mark.parametrize("S", [1.0, 2.0, 5.0])
@pytest.mark.parametrize("phi", [0.0, 0.4, -0.9])
def test_enthalpy_capacity_is_minus_three_s(S, phi):
    assert heat_capacity(EMGB_H, StatePoint(S, phi), "C_phi") == pytest.approx(-3 * S, rel=1e-12)


def test_capacity_wrong_representation():
    with pytest.raises(WrongRepresentation):
        heat_capacity(EMGB, StatePoint(1.0, 1.0), "C_phi")
    with pytest.raises(WrongRepresentation):
        heat_capacity(EMGB_H, StatePoint(1.0, 0.0), "C_Q")


def test_capacity_divergence_is_signed_infinity():
    assert capacity_ratio(2.0, 0.0) == math.inf
    assert capacity_ratio(-2.0, 1e-14) == -math.inf
    assert capacity_ratio(2.0, -1e-13) == -math.inf
    assert capacity_ratio(1.0, 0.5) == 2.0


def test_emgb_potentials():
    pot = potentials(EMGB, StatePoint(1.0, 1.0))
    assert pot["M"] == pytest.approx(4 / 3)
    assert pot["H"] == pytest.approx(2 / 3)
    assert pot["F"] == pytest.approx(8 / 9)
    assert pot["G"] == pytest.approx(2 / 9)


def test_uncharged_enthalpy_equals_mass():
    pot = potentials(EMGB, StatePoint(2.7, 0.0))
    assert pot["H"] == pot["M"]


def test_gibbs_potential():
    eq = make_model("emgb/area/gibbs").eq
    assert potentials(eq, StatePoint(1.0, 0.0))["G"] == pytest.approx(4 / 27, rel=1e-14)


def test_report_stable():
    r = thermo_report(EMGB, StatePoint(1.0, 1.0))
    assert r.T == pytest.approx(4 / 9)
    assert r.C_Q == pytest.approx(3.0)
    assert r.stable and r.T_positive and r.domain_ok and not r.capacity_divergent
    assert r.applicable_capacity() == r.C_Q


def test_report_charge_inside_stable_window():
    # A = 3 - 1.44 > 0 and B = 3 - 7.2 < 0, so C_Q = -3 A / B = +1.1142857...
    r = thermo_report(EMGB, StatePoint(1.0, 1.2))
    assert r.C_Q == pytest.approx(-3 * 1.56 / -4.2, rel=1e-13)
    assert r.stable and r.T_positive


def test_report_unstable():
    # B = 3 - 1.25 > 0 with A > 0: negative capacity
    r = thermo_report(EMGB, StatePoint(1.0, 0.5))
    assert r.C_Q == pytest.approx(-3 * 2.75 / 1.75, rel=1e-13)
    assert not r.stable and r.T_positive


def test_report_negative_temperature():
    r = thermo_report(EMGB, StatePoint(0.2, 1.0))
    assert r.T < 0 and not r.T_positive and r.domain_ok


def test_report_divergent_capacity():
    S = (5 / 3) ** 0.75
    # choose Q so that 3 S^(4/3) = 5 Q^2 holds to the last bit
    Q = math.sqrt(3 * S ** (4 / 3) / 5)
    r = thermo_report(EMGB, StatePoint(S, Q))
    if r.capacity_divergent:
        assert not r.stable and math.isinf(r.C_Q)
    else:
        assert abs(r.C_Q) > 1e10


def test_report_flags_negative_entropy():
    b = make_model("emgb/modified/entropy", {"alpha": -2.0})
    r = thermo_report(b.eq, b.resolve({"M": 1.0, "q": 0.5}))
    assert r.state["S"] < 0 and r.entropy_negative


def test_report_domain_error():
    with pytest.raises(DomainError):
        thermo_report(EMGB, StatePoint(0.0, 1.0))


def test_entropy_temperature_division_by_zero():
    # S(M) = M^2 has dS/dM = 0 at M = 0
    eq = ParametricEquation(representation=ENTROPY, coordinate_of_r=lambda r, y, p: r,
                            potential_of_r=lambda r, y, p: r * r, bracket=lambda y, p: (-1.0, 1.0),
                            guess=lambda x, y, p: x)
    with pytest.raises(DivisionByZeroJet):
        temperature(eq, StatePoint(0.0, 0.0))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 6.0), st.floats(-2.0, 2.0), st.floats(-1, 1), st.floats(-1, 1))
def test_first_law(S, Q, dS, dQ):
    eq = make_model("emgb-lambda/area/mass", {"Lambda": -1.0}).eq
    j = eval_jet(eq, StatePoint(S, Q))
    r = thermo_report(eq, StatePoint(S, Q))
    lhs = j.coeff(1, 0) * dS + j.coeff(0, 1) * dQ
    rhs = r.T * dS + r.conjugates[1] * dQ
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 6.0), st.floats(-2.0, 2.0))
def test_enthalpy_routes_agree(S, Q):
    p = StatePoint(S, Q)
    r = thermo_report(EMGB, p)
    H = legendre_transform(EMGB)
    h_num = eval_jet(H, StatePoint(S, r.conjugates[1])).value
    assert h_num == pytest.approx(r.potentials["H"], rel=1e-10)


@pytest.mark.parametrize("mid,params,var,lo,hi,fixed", [
    ("emgb/area/mass", {}, "S", 0.2, 5.0, {"Q": 1.0}),
    ("emgb-lambda/area/mass", {"Lambda": -1.0}, "S", 0.05, 10.0, {"Q": 0.5}),
    ("eymgb/area/mass", {}, "Q", 0.0, 3.0, {"S": 10.0}),
])
def test_capacity_sign_changes_only_at_roots(mid, params, var, lo, hi, fixed):
    b = make_model(mid, params)
    xs = np.linspace(lo, hi, 4001)
    vals = dict(fixed)
    vals[var] = xs
    p = b.resolve(vals)
    j = eval_jet(b.eq, p)
    P1, P11 = j.c[1], 2 * j.c[3]
    C = capacity_ratio(P1, P11)
    flips = np.flatnonzero(np.sign(C[1:]) != np.sign(C[:-1]))
    for k in flips:
        assert (np.sign(P1[k]) != np.sign(P1[k + 1])) or (np.sign(P11[k]) != np.sign(P11[k + 1]))
