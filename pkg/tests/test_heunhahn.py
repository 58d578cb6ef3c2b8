import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hahnheun import linalg
from hahnheun.heunhahn import (HeunParams, PochhammerBasis, TridiagonalityError,
                               TruncationError, build_heun_hahn, converse_tridiagonal_family,
                               degree_raise_check, engineer_qes_params, match_heun_template,
                               pochhammer_tridiag, qes_truncate, sigma1, sigma2, sigma3)
from hahnheun.polyops import ONE, X, Poly, falling_x
from hahnheun.shiftalg import ShiftOp, is_admissible

from conftest import small_fractions

sympy = pytest.importorskip("sympy")

heun_params = st.builds(HeunParams, *[small_fractions] * 7)


def sympy_bands(p: HeunParams, N: int, n: int):
    """Independent oracle: expand W phi_n in falling factorials with sympy."""
    x = sympy.Symbol("x")
    R = sympy.Rational
    kappa, mu1, mu0, nu1, nu0, r1, r0 = (R(v.numerator, v.denominator) for v in p.as_vector())
    a1 = (x - N) * (kappa * x**2 + mu1 * x + mu0)
    a2 = x * (kappa * x**2 + nu1 * x + nu0)
    a0 = -a1 - a2 + r1 * x + r0
    phi = sympy.ff(x, n)
    img = sympy.expand(a1 * phi.subs(x, x + 1) + a2 * phi.subs(x, x - 1) + a0 * phi)
    cs = sympy.symbols(f"c0:{n + 2}")
    ansatz = sum(c * sympy.ff(x, k) for k, c in enumerate(cs))
    sol = sympy.solve(sympy.Poly(sympy.expand(img - ansatz), x).all_coeffs(), cs)
    get = lambda k: Fraction(str(sol[cs[k]])) if 0 <= k <= n + 1 else Fraction(0)
    return get(n + 1), get(n), get(n - 1)


def test_build_example_coefficients():
    p = HeunParams(1, 0, 0, 0, 0, 0, 0)
    W = build_heun_hahn(p, 3)
    assert W.coeff(1) == (X - 3) * X * X
    assert W.coeff(-1) == X ** 3
    assert W.coeff(0) == -W.coeff(1) - W.coeff(-1)
    assert W.apply_poly(ONE).is_zero()


def test_template_round_trip_and_rejection():
    p = HeunParams(*map(Fraction, (1, 2, -3, 4, 5, -1, 7)))
    assert match_heun_template(build_heun_hahn(p, 5), 5) == p
    assert match_heun_template(ShiftOp.T(2), 5) is None
    assert match_heun_template(ShiftOp.T(1), 5) is None


def test_sigma_edge_values():
    p = HeunParams(*map(Fraction, (2, 3, 5, 7, 11, 13, 17)))
    N = 6
    assert sigma1(p, N, 0) == p.r1
    assert sigma2(p, N, 0) == p.r0
    assert sigma3(p, N, 0) == 0
    assert sigma3(p, N, N + 1) == 0


@pytest.mark.parametrize("N", [2, 3, 5])
def test_sigma_against_sympy_oracle(N):
    rng = random.Random(N)
    p = HeunParams(*[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(7)])
    for n in range(N + 1):
        assert (sigma1(p, N, n), sigma2(p, N, n), sigma3(p, N, n)) == sympy_bands(p, N, n)


@settings(max_examples=30, deadline=None)
@given(heun_params, st.integers(1, 6))
def test_tridiagonal_closed_forms_hold(p, N):
    result = pochhammer_tridiag(build_heun_hahn(p, N), PochhammerBasis(N), p)
    assert result.ok, result.matches


@settings(max_examples=30, deadline=None)
@given(heun_params, st.integers(1, 6))
def test_admissible_and_degree_raising(p, N):
    W = build_heun_hahn(p, N)
    assert is_admissible(W, N)
    ok, report = degree_raise_check(W, N)
    if all(sigma1(p, N, n) != 0 for n in range(N)):
        assert ok
    for row in report["rows"]:
        assert row["leading"] == row["predicted"]


def test_non_tridiagonal_operator_raises():
    # multiplication by x^3 sends phi_0 three bands up
    W = ShiftOp({0: X ** 3})
    with pytest.raises(TridiagonalityError):
        pochhammer_tridiag(W, PochhammerBasis(3), HeunParams())


def test_converse_family_is_seven_dimensional():
    assert converse_tridiagonal_family(4) == (7, True)


def test_qes_one_dimensional_truncation():
    N, M = 5, 1
    # sigma1(1) = mu1 - nu1 + kappa (-N) + r1 = 0
    p = HeunParams(*map(Fraction, (1, 2, 3, 0, 4, 3, 1)))
    assert sigma1(p, N, M) == 0
    res = qes_truncate(p, N, M)
    assert res.matrix == [[sigma2(p, N, 0), sigma3(p, N, 1)],
                          [sigma1(p, N, 0), sigma2(p, N, 1)]]
    a = res.matrix
    assert res.charpoly == Poly([a[0][0] * a[1][1] - a[0][1] * a[1][0],
                                 -(a[0][0] + a[1][1]), 1])


def test_qes_zero_operator_has_full_kernel():
    res = qes_truncate(HeunParams(), 4, 2)
    assert len(res.kernel) == 3


def test_qes_condition_enforced():
    p = HeunParams(*map(Fraction, (1, 0, 0, 0, 0, 1, 0)))
    with pytest.raises(TruncationError):
        qes_truncate(p, 5, 2)
    with pytest.raises(ValueError):
        qes_truncate(HeunParams(), 4, 4)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_engineered_kernel_is_exact(M):
    rng = random.Random(M)
    N = 7
    p = engineer_qes_params(N, M, rng)
    res = qes_truncate(p, N, M)
    assert res.kernel
    W = build_heun_hahn(p, N)
    for psi in res.kernel:
        assert psi.degree <= M and W.apply_poly(psi).is_zero()
    assert res.charpoly == linalg.charpoly(res.matrix)
    assert res.charpoly(0) == 0


def test_linalg_against_sympy():
    rng = random.Random(7)
    for _ in range(5):
        rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5)]
                for _ in range(4)]
        rows[3] = [a + b for a, b in zip(rows[0], rows[1])]
        S = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows])
        assert linalg.rank(rows) == S.rank()
        for v in linalg.nullspace(rows, 5):
            assert linalg.matvec(rows, v) == [0] * 4
        assert len(linalg.nullspace(rows, 5)) == 5 - S.rank()
        sq = [r[:4] for r in rows[:3]] + [[Fraction(1), 0, 2, 0]]
        Sq = sympy.Matrix([[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator)
                            for v in r] for r in sq])
        x = sympy.Symbol("x")
        expected = [Fraction(str(c)) for c in reversed(Sq.charpoly(x).all_coeffs())]
        assert linalg.charpoly(sq).coeffs == tuple(expected)


def test_basis_is_falling_factorial():
    b = PochhammerBasis(3)
    assert b[2] == X * (X - 1)
    assert b[4] == falling_x(4)
    assert b.expand(X * X) == [0, 1, 1]
