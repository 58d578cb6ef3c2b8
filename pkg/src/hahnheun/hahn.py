"""Monic Hahn polynomials, the bispectral pair X, Y, the Hahn algebra, and
the bilinear (algebraic) Heun operator built from X and Y.

    Y = B(x) T^+ + D(x) T^- - (B(x) + D(x)) I
    B(x) = (x - N)(x + alpha + 1),   D(x) = x (x - beta - N - 1)
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction

from .exactnum import format_rational, pochhammer, rational
from .heunhahn import HeunParams, build_heun_hahn, expand_in_monic_basis
from .polyops import ONE, X, Poly, rising
from .shiftalg import ShiftOp, anticommutator, commutator, shiftop_compose


class HahnParamError(ValueError):
    pass


@dataclass(frozen=True)
class HahnParams:
    alpha: Fraction
    beta: Fraction
    N: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", rational(self.alpha))
        object.__setattr__(self, "beta", rational(self.beta))
        if int(self.N) != self.N or self.N < 1:
            raise HahnParamError(f"N must be a positive integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))

    def problems(self, n_max: int | None = None) -> list[str]:
        """Vanishing Pochhammers that make P_n undefined for some n <= n_max."""
        n_max = self.N if n_max is None else n_max
        a, b = self.alpha, self.beta
        out = []
        for n in range(n_max + 1):
            if pochhammer(a + 1, n) == 0:
                out.append(f"(alpha+1)_{n} = 0")
            if pochhammer(n + a + b + 1, n) == 0:
                out.append(f"({n}+alpha+beta+1)_{n} = 0")
        return out

    def validate(self, n_max: int | None = None) -> None:
        problems = self.problems(n_max)
        if problems:
            raise HahnParamError("invalid Hahn parameters: " + "; ".join(problems))

    def to_json(self) -> dict:
        return {"alpha": format_rational(self.alpha), "beta": format_rational(self.beta),
                "N": self.N}


@dataclass(frozen=True)
class Taus:
    tau0: Fraction = Fraction(0)
    tau1: Fraction = Fraction(0)
    tau2: Fraction = Fraction(0)
    tau3: Fraction = Fraction(0)
    tau4: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, rational(getattr(self, f.name)))

    def to_json(self) -> dict:
        return {f.name: format_rational(getattr(self, f.name)) for f in fields(self)}


def B_coeff(h: HahnParams) -> Poly:
    return (X - h.N) * (X + h.alpha + 1)


def D_coeff(h: HahnParams) -> Poly:
    return X * (X - h.beta - h.N - 1)


def build_X() -> ShiftOp:
    return ShiftOp.mul(X)


def build_Y(h: HahnParams) -> ShiftOp:
    b, d = B_coeff(h), D_coeff(h)
    return ShiftOp.second_order(b, d, -(b + d))


def eigenvalue(h: HahnParams, n: int) -> Fraction:
    return n * (n + h.alpha + h.beta + 1)


def hahn_poly(h: HahnParams, n: int) -> Poly:
    """Monic P_n = kappa_n 3F2(-n, n+a+b+1, -x; a+1, -N; 1), expanded in x."""
    if not 0 <= n <= h.N:
        raise ValueError(f"index n={n} outside 0..{h.N}")
    h.validate(n)
    a, b, N = h.alpha, h.beta, h.N
    kappa = pochhammer(a + 1, n) * pochhammer(-N, n) / pochhammer(n + a + b + 1, n)
    term = kappa
    out = Poly.const(term)
    minus_x = -X
    for k in range(n):
        term = term * (-n + k) * (n + a + b + 1 + k) / ((a + 1 + k) * (-N + k) * (k + 1))
        out = out + rising(minus_x, k + 1) * term
    return out


def hahn_basis(h: HahnParams, n_max: int | None = None) -> list[Poly]:
    n_max = h.N if n_max is None else n_max
    return [hahn_poly(h, n) for n in range(n_max + 1)]


def hahn_recurrence(h: HahnParams, n: int, basis: list[Poly] | None = None) -> tuple[Fraction, Fraction]:
    """(b_n, u_n) in x P_n = P_{n+1} + b_n P_n + u_n P_{n-1}, by coefficient matching."""
    if not 0 <= n <= h.N - 1:
        raise ValueError(f"recurrence index n={n} outside 0..{h.N - 1}")
    if basis is None:
        basis = hahn_basis(h, n + 1)
    prev, cur, nxt = (basis[n - 1] if n else Poly()), basis[n], basis[n + 1]
    rest = X * cur - nxt
    b = rest.coeff(n)
    rest = rest - cur * b
    u = rest.coeff(n - 1) if n > 0 else Fraction(0)
    rest = rest - prev * u
    if not rest.is_zero():
        raise ArithmeticError(f"three-term recurrence fails at n={n}: residual {rest}")
    return b, u


def hahn_algebra_constants(h: HahnParams) -> dict[str, Fraction]:
    a, b, N = h.alpha, h.beta, h.N
    return {
        "a": Fraction(-2),
        "b": 2 * N + b - a,
        "c1": -(a + b) * (a + b + 2),
        "c2": Fraction(-1),
        "d1": N * (a + 1) * (a + b),
        "d2": N * (a + 1),
    }


def hahn_algebra_residuals(h: HahnParams, consts: dict[str, Fraction]) -> tuple[ShiftOp, ShiftOp]:
    """Residual operators of both Hahn-algebra relations for K1 = X, K2 = Y."""
    K1, K2 = build_X(), build_Y(h)
    K3 = commutator(K1, K2)
    I = ShiftOp.identity()
    r1 = commutator(K2, K3) - (anticommutator(K1, K2) * consts["a"] + K2 * consts["b"]
                               + K1 * consts["c1"] + I * consts["d1"])
    r2 = commutator(K3, K1) - (shiftop_compose(K1, K1) * consts["a"] + K1 * consts["b"]
                               + K2 * consts["c2"] + I * consts["d2"])
    return r1, r2


def verify_hahn_algebra(h: HahnParams) -> tuple[bool, dict]:
    """Check both relations with the closed-form constants, and fit the constants
    independently to confirm they are the unique solution."""
    from .heunracah import fit_relation

    consts = hahn_algebra_constants(h)
    r1, r2 = hahn_algebra_residuals(h, consts)
    K1, K2 = build_X(), build_Y(h)
    K3 = commutator(K1, K2)
    I = ShiftOp.identity()
    fit = fit_relation(
        [(commutator(K2, K3), {"a": anticommutator(K1, K2), "b": K2, "c1": K1, "d1": I}),
         (commutator(K3, K1), {"a": shiftop_compose(K1, K1), "b": K1, "c2": K2, "d2": I})],
    )
    fitted_ok = fit.unique and all(fit.values[k] == v for k, v in consts.items())
    ok = r1.is_zero() and r2.is_zero() and fitted_ok
    return ok, {
        "ok": ok,
        "relation_1": r1.is_zero(),
        "relation_2": r2.is_zero(),
        "constants": {k: format_rational(v) for k, v in consts.items()},
        "fitted": fit.to_json(),
        "fitted_matches": fitted_ok,
    }


def tau_to_heun(t: Taus, h: HahnParams) -> HeunParams:
    a, b, N = h.alpha, h.beta, h.N
    kappa = t.tau1 + t.tau2
    s = t.tau2 + t.tau4
    d = t.tau4 - t.tau2
    return HeunParams(
        kappa=kappa,
        mu1=kappa * (a + 1) + s,
        mu0=(a + 1) * s,
        nu1=d - kappa * (b + N + 1),
        nu0=-(b + N + 1) * d,
        r1=(a + b + 2) * t.tau2 + t.tau3,
        r0=t.tau0 - N * (a + 1) * t.tau2,
    )


def bilinear_closed_form(t: Taus, h: HahnParams) -> ShiftOp:
    a, b, N = h.alpha, h.beta, h.N
    k = t.tau1 + t.tau2
    a1 = (X - N) * (X + a + 1) * Poly((t.tau2 + t.tau4, k))
    a2 = X * (X - b - N - 1) * Poly((t.tau4 - t.tau2, k))
    a0 = -a1 - a2 + Poly(((t.tau0 - N * (a + 1) * t.tau2), (a + b + 2) * t.tau2 + t.tau3))
    return ShiftOp.second_order(a1, a2, a0)


def compose_bilinear(t: Taus, Xop: ShiftOp, Yop: ShiftOp):
    """tau1 XY + tau2 YX + tau3 X + tau4 Y + tau0 I for any pair of operators
    supporting composition, addition and scaling."""
    ident = type(Xop).identity()
    return (Xop * Yop) * t.tau1 + (Yop * Xop) * t.tau2 + Xop * t.tau3 + Yop * t.tau4 \
        + ident * t.tau0


def build_bilinear_W(t: Taus, h: HahnParams) -> tuple[ShiftOp, HeunParams, dict]:
    """Compose the bilinear operator and check it against the closed-form
    coefficients and the seven-parameter form."""
    W = compose_bilinear(t, build_X(), build_Y(h))
    closed = bilinear_closed_form(t, h)
    p = tau_to_heun(t, h)
    checks = {
        "matches_closed_form": W == closed,
        "matches_heun_form": W == build_heun_hahn(p, h.N),
        "kappa_is_tau1_plus_tau2": p.kappa == t.tau1 + t.tau2,
    }
    return W, p, checks


@dataclass
class HahnBasisExpansion:
    xi: list[Fraction]       # coefficient of P_{n+1} in W P_n (xi_{n+1})
    eta: list[Fraction]
    zeta_u: list[Fraction]   # coefficient of P_{n-1}
    b: list[Fraction]
    u: list[Fraction]
    lam: list[Fraction]
    mismatches: dict[str, list[int]]

    @property
    def ok(self) -> bool:
        return not any(self.mismatches.values())

    def to_json(self) -> dict:
        fmt = lambda xs: [format_rational(v) for v in xs]
        return {"xi_next": fmt(self.xi), "eta": fmt(self.eta), "zeta_u": fmt(self.zeta_u),
                "b": fmt(self.b), "u": fmt(self.u), "lambda": fmt(self.lam),
                "closed_form_mismatches": self.mismatches, "ok": self.ok}


class HahnBandError(ArithmeticError):
    def __init__(self, n: int, k: int, value: Fraction):
        self.n, self.k, self.value = n, k, value
        super().__init__(f"W P_{n} has coefficient {format_rational(value)} on P_{k}")


def xi_coeff(t: Taus, h: HahnParams, n: int) -> Fraction:
    return t.tau1 * eigenvalue(h, n - 1) + t.tau2 * eigenvalue(h, n) + t.tau3


def zeta_coeff(t: Taus, h: HahnParams, n: int) -> Fraction:
    return t.tau2 * eigenvalue(h, n - 1) + t.tau1 * eigenvalue(h, n) + t.tau3


def eta_coeff(t: Taus, h: HahnParams, n: int, b_n: Fraction) -> Fraction:
    lam = eigenvalue(h, n)
    return (t.tau1 + t.tau2) * lam * b_n + t.tau3 * b_n + t.tau4 * lam + t.tau0


def hahn_tridiag(W: ShiftOp, h: HahnParams, t: Taus) -> HahnBasisExpansion:
    """Expand W P_n in the Hahn basis for n = 0..N-1 and compare with the
    closed-form recurrence coefficients."""
    basis = hahn_basis(h)
    out = HahnBasisExpansion([], [], [], [], [], [], {"xi": [], "eta": [], "zeta": []})
    for n in range(h.N):
        c = expand_in_monic_basis(W.apply_poly(basis[n]), basis)
        for k, v in enumerate(c):
            if v != 0 and abs(k - n) > 1:
                raise HahnBandError(n, k, v)
        get = lambda k: c[k] if 0 <= k < len(c) else Fraction(0)
        b_n, u_n = hahn_recurrence(h, n, basis)
        out.xi.append(get(n + 1))
        out.eta.append(get(n))
        out.zeta_u.append(get(n - 1))
        out.b.append(b_n)
        out.u.append(u_n)
        out.lam.append(eigenvalue(h, n))
        if get(n + 1) != xi_coeff(t, h, n + 1):
            out.mismatches["xi"].append(n)
        if get(n) != eta_coeff(t, h, n, b_n):
            out.mismatches["eta"].append(n)
        if get(n - 1) != zeta_coeff(t, h, n) * u_n:
            out.mismatches["zeta"].append(n)
    return out


def pochhammer_unsigned(n: int) -> Poly:
    """(-x)_n, the basis in which X and Y are two-diagonal."""
    return rising(-X, n)


def verify_two_diagonal(h: HahnParams) -> tuple[bool, dict]:
    """X f_n = n f_n - f_{n+1} and Y f_n = n(n+1+a+b) f_n + n(N-n+1)(a+n) f_{n-1}
    for f_n = (-x)_n, n = 0..N."""
    a, b, N = h.alpha, h.beta, h.N
    Xop, Yop = build_X(), build_Y(h)
    f = [pochhammer_unsigned(n) for n in range(N + 2)]
    bad_x, bad_y = [], []
    for n in range(N + 1):
        if Xop.apply_poly(f[n]) != f[n] * n - f[n + 1]:
            bad_x.append(n)
        rhs = f[n] * (n * (n + 1 + a + b))
        if n > 0:
            rhs = rhs + f[n - 1] * (n * (N - n + 1) * (a + n))
        if Yop.apply_poly(f[n]) != rhs:
            bad_y.append(n)
    ok = not bad_x and not bad_y
    return ok, {"ok": ok, "X_failures": bad_x, "Y_failures": bad_y}
