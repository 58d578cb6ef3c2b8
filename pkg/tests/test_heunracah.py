import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from hahnheun.hahn import HahnParams, Taus, build_X, build_Y, compose_bilinear
from hahnheun.heunracah import (NonUniqueFit, RelationFails, build_racah_triple,
                                degeneration_check, differential_realization,
                                e_closed_forms, fit_heun_racah, fit_racah_pair,
                                fit_relation, fit_xw_relations, pi3_closed_form,
                                racah_conditions, verify_racah_pairs)
from hahnheun.polyops import X, Poly
from hahnheun.shiftalg import ShiftOp, anticommutator, commutator

from conftest import polys, small_fractions

taus = st.builds(Taus, *[small_fractions] * 5)


@st.composite
def hahn_params(draw):
    h = HahnParams(draw(small_fractions), draw(small_fractions), draw(st.integers(2, 6)))
    assume(not h.problems())
    return h


def test_e2_examples():
    h = HahnParams(Fraction(1, 3), Fraction(1, 5), 5)
    assert e_closed_forms(Taus(tau1=1, tau2=1), h)[1] == 8
    assert e_closed_forms(Taus(tau1=1, tau2=-1), h)[1] == 0


def test_fit_relation_recovers_known_combination():
    A, B = ShiftOp.T(1), ShiftOp.mul(X)
    fit = fit_relation([(A * 3 - B * Fraction(1, 2), {"p": A, "q": B})], strict=True)
    assert fit.values == {"p": 3, "q": Fraction(-1, 2)}
    with pytest.raises(RelationFails):
        fit_relation([(ShiftOp.T(2), {"p": A})], strict=True)


def test_xw_fit_with_w_equal_to_x_is_not_unique():
    Xop = build_X()
    with pytest.raises(NonUniqueFit) as err:
        fit_xw_relations(Xop, Xop)
    result = err.value.result
    assert result.residual_zero
    # both left-hand sides vanish, so all constants equal to zero is a solution
    assert commutator(Xop, commutator(Xop, Xop)).is_zero()
    sc = fit_xw_relations(Xop, Xop, strict=False)
    assert not sc.solvable["RXW1"]


@settings(max_examples=15, deadline=None)
@given(taus, hahn_params())
def test_heun_racah_relations(t, h):
    Y = build_Y(h)
    W = compose_bilinear(t, build_X(), Y)
    sc = fit_heun_racah(Y, W, strict=False)
    assert sc.fits["RH1"].residual_zero and sc.fits["RH2"].residual_zero
    if all(sc.solvable.values()):
        assert (sc["e1"], sc["e2"]) == e_closed_forms(t, h)
    assert sc["e2"] == 2 * (t.tau1 + t.tau2) ** 2


@settings(max_examples=10, deadline=None)
@given(taus, hahn_params(), polys(3))
def test_first_relation_as_action(t, h, p):
    Y = build_Y(h)
    W = compose_bilinear(t, build_X(), Y)
    sc = fit_heun_racah(Y, W, strict=False)
    g = sc.values
    lhs = commutator(Y, commutator(Y, W)).apply_poly(p)
    rhs = ((Y * Y) * g["g1"] + anticommutator(Y, W) * g["g2"] + Y * g["g3"]
           + W * g["g4"] + ShiftOp.identity() * g["g5"]).apply_poly(p)
    assert lhs == rhs


@settings(max_examples=10, deadline=None)
@given(taus, hahn_params())
def test_xw_relations(t, h):
    W = compose_bilinear(t, build_X(), build_Y(h))
    assume(W != build_X() * t.tau3 + ShiftOp.identity() * t.tau0)
    sc = fit_xw_relations(build_X(), W, strict=False)
    assert sc.fits["RXW1"].residual_zero and sc.fits["RXW2"].residual_zero


def test_racah_conditions():
    assert racah_conditions(Taus(tau1=-1, tau2=1, tau4=1)) == (True, 1)
    assert racah_conditions(Taus(tau1=1, tau2=-1, tau4=1)) == (True, -1)
    assert racah_conditions(Taus(tau3=2, tau0=1)) == (True, None)
    assert racah_conditions(Taus(tau1=1, tau2=1)) == (False, None)
    assert racah_conditions(Taus(tau1=-1, tau2=1, tau4=2)) == (False, None)


@pytest.mark.parametrize("t", [Taus(tau1=1, tau2=1), Taus(tau1=-1, tau2=1, tau4=-1),
                               Taus(tau1=-2, tau2=2, tau4=2, tau3=1), Taus(tau1=-1, tau2=1)])
def test_degeneration_iff(t):
    report = degeneration_check(t, samples=2, seed=3)
    assert report["iff_consistent"]


def test_racah_triple():
    h = HahnParams(Fraction(1, 3), Fraction(1, 5), 4)
    triple = build_racah_triple(h, Fraction(2, 7), Fraction(-1, 3))
    assert all(triple.checks.values()), triple.checks
    ok, report = verify_racah_pairs(triple)
    assert ok, report
    with pytest.raises(ValueError):
        fit_racah_pair(triple.W1, triple.W1)


def test_differential_realization_second_order():
    t = Taus(tau1=1, tau2=-1, tau3=2, tau4=3, tau0=1)
    W, info = differential_realization(Poly([1, 2]), Poly([3, -1]), t)
    assert info["ok"], info
    assert W.order == 2
    assert W.coeff(2) == pi3_closed_form(t)


def test_differential_realization_third_order():
    t = Taus(tau1=2, tau2=1, tau3=-1, tau4=1, tau0=5)
    W, info = differential_realization(Poly([0, 1]), Poly([1, 1]), t)
    assert info["ok"], info
    assert W.coeff(3) == (X * (X - 1)) ** 2 * -3


def test_differential_realization_rejects_high_degree():
    with pytest.raises(ValueError):
        differential_realization(X * X, X, Taus())


@settings(max_examples=25, deadline=None)
@given(taus, polys(1), polys(1))
def test_differential_realization_property(t, q1, t1):
    _, info = differential_realization(q1, t1, t)
    assert info["ok"], info
