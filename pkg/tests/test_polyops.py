from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hahnheun.polyops import (NEG_INF, ONE, ZERO, X, DiffOp, Poly, RatFunc, diffop_apply,
                              diffop_compose, ordinary_heun_degree_check, poly_arith,
                              poly_gcd, poly_shift, rising)

from conftest import diffops, polys, small_fractions


def test_poly_arith_examples():
    assert poly_arith(X + 1, X - 1, "*") == Poly([-1, 0, 1])
    p = Poly([3, 0, Fraction(1, 2)])
    assert poly_arith(p, ZERO, "+") == p
    assert X * X * X == Poly.monomial(3)


def test_zero_polynomial_is_distinct():
    assert ZERO.degree == NEG_INF
    assert Poly([0, 0]).coeffs == ()
    assert Poly.const(0) == ZERO
    assert ONE.degree == 0


def test_shift_examples():
    assert poly_shift(X * X, 1) == Poly([1, 2, 1])
    p = Poly([4, -1, 7])
    assert poly_shift(p, 0) == p
    minus_x_2 = rising(-X, 2)
    assert minus_x_2 == Poly([0, -1, 1])
    assert poly_shift(minus_x_2, 1) == Poly([0, 1, 1])


def test_serialization():
    assert (X * X - Fraction(1, 2)).to_json() == ["-1/2", "0", "1"]
    assert Poly.from_json(["-1/2", "0", "1"]) == X * X - Fraction(1, 2)


def test_diffop_apply_examples():
    assert diffop_apply(DiffOp.d(), Poly.monomial(3)) == Poly.monomial(2, 3)
    euler = DiffOp({1: X})
    for n in range(6):
        assert diffop_apply(euler, Poly.monomial(n)) == Poly.monomial(n, n)
    hyp = DiffOp({2: X * (1 - X), 1: 1 - 2 * X})
    assert diffop_apply(hyp, X) == 1 - 2 * X


def test_diffop_compose_examples():
    d, x = DiffOp.d(), DiffOp.mul(X)
    assert diffop_compose(d, x) - diffop_compose(x, d) == DiffOp.identity()
    D = DiffOp({2: X * X, 0: Poly([1, 1])})
    assert diffop_compose(DiffOp.identity(), D) == D
    euler = DiffOp({1: X})
    assert diffop_compose(euler, euler) == DiffOp({2: X * X, 1: X})


def test_ordinary_heun_degree_check_examples():
    ok, report = ordinary_heun_degree_check(DiffOp({2: X ** 3, 1: X ** 2, 0: X}), 8)
    assert ok and not report["degenerate"]
    ok, report = ordinary_heun_degree_check(DiffOp.d(), 8)
    assert ok and report["degenerate"]
    ok, report = ordinary_heun_degree_check(DiffOp({2: X ** 4}), 4)
    assert not ok
    assert report["failures"][0]["n"] == 2
    # x^4 d^2 kills 1 and x, the first violation is at x^2 (degree 4)


def test_gcd_and_ratfunc_reduction():
    g = poly_gcd((X - 1) * (X + 2), (X - 1) * (X - 3))
    assert g == X - 1
    f = RatFunc((X - 1) * (X + 2) * 3, (X - 1) * (X - 3) * 2)
    assert f.den == X - 3
    assert f.num == (X + 2) * Fraction(3, 2)
    assert RatFunc(ZERO, X) == RatFunc(0)


def test_ratfunc_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RatFunc(X, ZERO)


@given(polys(5), small_fractions)
def test_shift_round_trip(p, c):
    assert poly_shift(poly_shift(p, c), -c) == p


@given(polys(5), small_fractions, small_fractions)
def test_shift_agrees_with_evaluation(p, c, x):
    assert p.shift(c)(x) == p(x + c)


@given(polys(4), polys(4).filter(lambda q: not q.is_zero()))
def test_divmod(p, q):
    quot, rem = p.divmod(q)
    assert quot * q + rem == p
    assert rem.degree < q.degree


@given(polys(3), polys(3).filter(lambda q: not q.is_zero()))
def test_ratfunc_normalization(num, den):
    f = RatFunc(num, den)
    assert f.den.lead == 1
    assert num * f.den == f.num * den
    if not f.is_zero():
        assert poly_gcd(f.num, f.den).degree == 0


@settings(max_examples=40, deadline=None)
@given(diffops(), diffops(), diffops(), polys(4))
def test_compose_associative_and_matches_action(a, b, c, p):
    ab = diffop_compose(a, b)
    assert diffop_compose(ab, c) == diffop_compose(a, diffop_compose(b, c))
    deg = 0 if a.is_zero() or b.is_zero() else a.order + b.order + 3
    for n in range(deg + 1):
        m = Poly.monomial(n)
        assert ab.apply(m) == a.apply(b.apply(m))
    assert ab.apply(p) == a.apply(b.apply(p))
