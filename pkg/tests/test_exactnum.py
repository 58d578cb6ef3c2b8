from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hahnheun.exactnum import (HypergeometricError, format_rational, hyp3f2_terminating,
                               parse_rational, pochhammer, rational_arith)

from conftest import small_fractions


def brute_3f2(num, den, upper):
    """Sum with each Pochhammer recomputed from scratch."""
    def poch(a, k):
        out = Fraction(1)
        for i in range(k):
            out *= a + i
        return out

    total = Fraction(0)
    for k in range(upper + 1):
        top = poch(num[0], k) * poch(num[1], k) * poch(num[2], k)
        if top == 0:
            break
        fact = 1
        for i in range(1, k + 1):
            fact *= i
        total += top / (poch(den[0], k) * poch(den[1], k) * fact)
    return total


def test_rational_examples():
    assert rational_arith(Fraction(1, 2), Fraction(1, 3), "+") == Fraction(5, 6)
    assert Fraction(2, 4) == Fraction(1, 2) and Fraction(2, 4).denominator == 2
    assert rational_arith(Fraction(3, 7), Fraction(7, 3), "*") == 1


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        rational_arith(1, 0, "/")


@pytest.mark.parametrize("text,value", [("3/4", Fraction(3, 4)), ("-2", Fraction(-2)),
                                        ("6/8", Fraction(3, 4)), (" 5 / 10 ", Fraction(1, 2))])
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1..2", "1/0", "x", "", "1/-2", "0.5"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_format():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(Fraction(4, 2)) == "2"


def test_pochhammer_examples():
    assert pochhammer(2, 3) == 2 * 3 * 4
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(-2, 4) == 0


def test_hyp3f2_examples():
    assert hyp3f2_terminating([0, 5, 7], [3, 4], 4) == 1
    assert hyp3f2_terminating([-1, 2, -1], [1, -2], 1) == 0
    assert hyp3f2_terminating([-1, 2, 0], [1, -2], 1) == 1


def test_hyp3f2_vanishing_denominator():
    with pytest.raises(HypergeometricError) as exc:
        hyp3f2_terminating([-3, 1, 1], [1, -1], 3)
    assert exc.value.k == 2


@given(small_fractions, st.integers(0, 20), st.integers(0, 20))
def test_pochhammer_splits(a, m, n):
    assert pochhammer(a, m + n) == pochhammer(a, m) * pochhammer(a + m, n)


@given(st.integers(0, 6), small_fractions, small_fractions,
       st.fractions(min_value=Fraction(1, 2), max_value=9, max_denominator=7),
       st.fractions(min_value=Fraction(1, 3), max_value=9, max_denominator=5))
def test_hyp3f2_matches_brute_force_and_is_symmetric(n, b, c, d, e):
    num, den = [-n, b, c], [d, e]
    value = hyp3f2_terminating(num, den, n)
    assert value == brute_3f2(num, den, n)
    assert hyp3f2_terminating([c, -n, b], [e, d], n) == value


@given(small_fractions, small_fractions.filter(lambda v: v != 0), st.sampled_from("+-*/"))
def test_arith_round_trip(a, b, op):
    inverse = {"+": "-", "-": "+", "*": "/", "/": "*"}[op]
    assert rational_arith(rational_arith(a, b, op), b, inverse) == a
