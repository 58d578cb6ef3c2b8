"""R-II polynomials of Hahn type, the rational functions U_n, and the
generalized eigenvalue problem L1 U_n = lambda_n L2 U_n.

The alpha, beta here are independent of the Hahn-polynomial parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import format_rational, pochhammer, rational
from .heunhahn import HeunParams, build_heun_hahn, match_heun_template
from .polyops import ONE, X, Poly, RatFunc, rising
from .shiftalg import ShiftOp


class RIIParamError(ValueError):
    pass


@dataclass(frozen=True)
class RIIParams:
    alpha: Fraction
    beta: Fraction
    N: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", rational(self.alpha))
        object.__setattr__(self, "beta", rational(self.beta))
        if int(self.N) != self.N or self.N < 1:
            raise RIIParamError(f"N must be a positive integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))

    def problems(self, n: int) -> list[str]:
        """Exclusions that make some U_m, m <= n, undefined or degenerate."""
        a, b, N = self.alpha, self.beta, self.N
        out = []
        if pochhammer(b + 1, n) == 0:
            out.append(f"(beta+1)_{n} = 0")
        if pochhammer(a, n) == 0:
            out.append(f"(alpha)_{n} = 0")
        for x in range(N + 1):
            for shift in (-1, 0, 1):
                xs = x + shift
                if pochhammer(a - xs, n) == 0:
                    out.append(f"pole alpha+k = {xs} (grid point {x}, shift {shift:+d})")
        if not out:
            for m in range(1, n + 1):
                P = rii_poly(self, m)
                for k in range(m):
                    if P(a + k) == 0:
                        out.append(f"P_{m} vanishes at the pole alpha+{k}")
        return sorted(set(out))

    def validate(self, n: int) -> None:
        problems = self.problems(n)
        if problems:
            raise RIIParamError("invalid R-II parameters: " + "; ".join(problems))

    def to_json(self) -> dict:
        return {"alpha": format_rational(self.alpha), "beta": format_rational(self.beta),
                "N": self.N}


def rii_poly(p: RIIParams, n: int) -> Poly:
    """P_n = (a)_n (-N)_n / (b+1)_n * 3F2(-n, -x, -b-n; -N, 1-a-n; 1), monic."""
    if n < 0:
        raise ValueError("negative index")
    a, b, N = p.alpha, p.beta, p.N
    den = pochhammer(b + 1, n)
    if den == 0:
        raise RIIParamError(f"(beta+1)_{n} = 0")
    term = pochhammer(a, n) * pochhammer(-N, n) / den
    out = Poly.const(term)
    for k in range(n):
        d = (-N + k) * (1 - a - n + k)
        if d == 0:
            raise RIIParamError(f"denominator Pochhammer vanishes at k={k + 1}")
        term = term * (-n + k) * (-b - n + k) / (d * (k + 1))
        out = out + rising(-X, k + 1) * term
    return out


def lambda_n(p: RIIParams, n: int) -> Fraction:
    return n * (p.N - p.beta - n)


def build_U(p: RIIParams, n: int, strict: bool = True) -> RatFunc:
    """U_n = (-1)^n P_n / (a-x)_n = P_n / prod_k (x - a - k).

    With ``strict`` the parameters must avoid every exclusion, including
    cancellation of a pole against a zero of P_n (this happens e.g. for
    integer beta >= 0 and large n); otherwise the reduced quotient is
    returned as is.
    """
    if strict:
        p.validate(n)
    P = rii_poly(p, n)
    den = rising(Poly.const(p.alpha) - X, n) * ((-1) ** n)
    U = RatFunc(P, den)
    if strict and (U.num.degree != n or U.den.degree != n or U.num.lead != U.den.lead):
        raise ArithmeticError(f"U_{n} is not of monic type [{n}/{n}]")
    return U


def pole_set(U: RatFunc, alpha: Fraction) -> list[Fraction] | None:
    """Poles of U if they are exactly alpha, alpha+1, ..., alpha+deg-1.

    A monic denominator of degree d vanishing at d distinct points has no
    other roots, so the check is complete. Returns None otherwise.
    """
    d = U.den.degree
    candidates = [alpha + k for k in range(d)]
    if all(U.den(c) == 0 for c in candidates) and all(U.num(c) != 0 for c in candidates):
        return candidates
    return None


def build_L1(p: RIIParams) -> ShiftOp:
    a, b, N = p.alpha, p.beta, p.N
    xa = X - a
    return ShiftOp.second_order(
        (X - a + 1) * xa * (X - N),
        X * xa * (X + b - a - N),
        xa * Poly((-N * (a - 1), 2 * a - 1 + 2 * N - b, -2)),
    )


def build_L2(p: RIIParams) -> ShiftOp:
    return ShiftOp({0: X - p.alpha, -1: -X})


def l2_heun_params(p: RIIParams) -> HeunParams:
    return HeunParams(nu0=-1, r0=-p.alpha)


def pencil(p: RIIParams, lam) -> ShiftOp:
    return build_L1(p) - build_L2(p) * rational(lam)


@dataclass
class GEVPCheck:
    n: int
    lam: Fraction
    ok: bool
    residual: RatFunc
    grid_ok: bool
    poles: list[Fraction] | None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "lambda": format_rational(self.lam),
            "ok": self.ok,
            "residual": None if self.residual.is_zero() else self.residual.to_json(),
            "grid_ok": self.grid_ok,
            "poles": None if self.poles is None else [format_rational(r) for r in self.poles],
        }


def verify_gevp(p: RIIParams, n: int) -> GEVPCheck:
    """(L1 - lambda_n L2) U_n = 0 as rational functions, with evaluation of
    both sides at every grid point as an independent cross-check."""
    if not 0 <= n <= p.N:
        raise ValueError(f"n={n} outside 0..{p.N}")
    U = build_U(p, n, strict=False)
    lam = lambda_n(p, n)
    residual = pencil(p, lam).apply_ratfunc(U)
    L1, L2 = build_L1(p), build_L2(p)
    grid_ok = True
    for x in range(p.N + 1):
        lhs = _eval_op(L1, U, x)
        rhs = _eval_op(L2, U, x)
        if lhs != lam * rhs:
            grid_ok = False
    return GEVPCheck(n, lam, residual.is_zero(), residual, grid_ok, pole_set(U, p.alpha))


def _eval_op(W: ShiftOp, f: RatFunc, x: int) -> Fraction:
    total = Fraction(0)
    for k, c in W.terms.items():
        cx = c(x)
        if cx:
            total += cx * f(x + k)
    return total


def heun_membership(p: RIIParams) -> dict:
    """Both L1 and L2 match the seven-parameter Heun-Hahn template."""
    L1, L2 = build_L1(p), build_L2(p)
    m1 = match_heun_template(L1, p.N)
    m2 = match_heun_template(L2, p.N)
    return {
        "L1": None if m1 is None else m1.to_json(),
        "L2": None if m2 is None else m2.to_json(),
        "L2_matches_closed_form": m2 == l2_heun_params(p),
        "L2_equals_built": L2 == build_heun_hahn(l2_heun_params(p), p.N),
        "ok": m1 is not None and m2 == l2_heun_params(p),
    }
