import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hahnheun.polyops import DiffOp, Poly
from hahnheun.shiftalg import ShiftOp

small_fractions = st.fractions(min_value=-12, max_value=12, max_denominator=12)


@st.composite
def polys(draw, max_degree=3):
    coeffs = draw(st.lists(small_fractions, max_size=max_degree + 1))
    return Poly(coeffs)


@st.composite
def shiftops(draw, max_shift=2, max_degree=3):
    shifts = draw(st.lists(st.integers(-max_shift, max_shift), max_size=3, unique=True))
    return ShiftOp({k: draw(polys(max_degree)) for k in shifts})


@st.composite
def diffops(draw, max_order=2, max_degree=3):
    orders = draw(st.lists(st.integers(0, max_order), max_size=3, unique=True))
    return DiffOp({k: draw(polys(max_degree)) for k in orders})


@pytest.fixture
def rng():
    return random.Random(1234)


def F(*args):
    return Fraction(*args)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
