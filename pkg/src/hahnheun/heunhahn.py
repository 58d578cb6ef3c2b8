"""The Heun operator on the uniform grid {0, ..., N} in its seven-parameter
form, with its degree-raising and Pochhammer-tridiagonal structure.

    A1(x) = (x - N)(kappa x^2 + mu1 x + mu0)       on T^+
    A2(x) = x (kappa x^2 + nu1 x + nu0)            on T^-
    A0(x) = -A1(x) - A2(x) + r1 x + r0             on I
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Callable

from . import linalg
from .exactnum import RationalLike, format_rational, rational
from .polyops import NEG_INF, ONE, X, Poly, falling_x
from .shiftalg import ShiftOp, is_admissible


class TridiagonalityError(ArithmeticError):
    def __init__(self, n: int, band: int, value: Fraction):
        self.n = n
        self.band = band
        self.value = value
        super().__init__(
            f"W phi_{n} has coefficient {format_rational(value)} on phi_{band}, "
            f"outside the three central bands"
        )


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class HeunParams:
    kappa: Fraction = Fraction(0)
    mu1: Fraction = Fraction(0)
    mu0: Fraction = Fraction(0)
    nu1: Fraction = Fraction(0)
    nu0: Fraction = Fraction(0)
    r1: Fraction = Fraction(0)
    r0: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, rational(getattr(self, f.name)))

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_vector(self) -> list[Fraction]:
        return [getattr(self, n) for n in self.names()]

    @classmethod
    def from_vector(cls, v) -> "HeunParams":
        return cls(*v)

    def to_json(self) -> dict[str, str]:
        return {n: format_rational(getattr(self, n)) for n in self.names()}

    @property
    def degree_raising(self) -> bool:
        return self.r1 != 0


def heun_coefficients(p: HeunParams, N: int) -> tuple[Poly, Poly, Poly]:
    a1 = (X - N) * Poly((p.mu0, p.mu1, p.kappa))
    a2 = X * Poly((p.nu0, p.nu1, p.kappa))
    a0 = -a1 - a2 + Poly((p.r0, p.r1))
    return a1, a2, a0


def build_heun_hahn(p: HeunParams, N: int) -> ShiftOp:
    if N < 1:
        raise ValueError("N must be a positive integer")
    return ShiftOp.second_order(*heun_coefficients(p, N))


def match_heun_template(W: ShiftOp, N: int) -> HeunParams | None:
    """Read the seven parameters off W, or None if W is not of Heun-Hahn form."""
    if set(W.support) - {-1, 0, 1}:
        return None
    a1, a2, a0 = W.coeff(1), W.coeff(-1), W.coeff(0)
    if a1.degree > 3 or a2.degree > 3:
        return None
    q1, rem1 = a1.divmod(X - N)
    q2, rem2 = a2.divmod(X)
    if not rem1.is_zero() or not rem2.is_zero():
        return None
    if q1.coeff(2) != q2.coeff(2):
        return None
    lin = a0 + a1 + a2
    if lin.degree > 1:
        return None
    p = HeunParams(q2.coeff(2), q1.coeff(1), q1.coeff(0), q2.coeff(1), q2.coeff(0),
                   lin.coeff(1), lin.coeff(0))
    if build_heun_hahn(p, N) != W:
        return None
    return p


# closed forms for W phi_n = s1 phi_{n+1} + s2 phi_n + s3 phi_{n-1}

def sigma1(p: HeunParams, N: int, n: int) -> Fraction:
    return (p.mu1 - p.nu1 + p.kappa * (n - 1 - N)) * n + p.r1


def sigma2(p: HeunParams, N: int, n: int) -> Fraction:
    return (p.r0 + (p.mu0 + p.r1 - p.nu0 - p.mu1 * N - p.nu1 * n) * n
            + n * (2 * n - 1) * (p.mu1 - p.kappa * (N - n + 1)))


def sigma3(p: HeunParams, N: int, n: int) -> Fraction:
    return -n * (N - n + 1) * (p.mu0 + (n - 1) * (p.mu1 + p.kappa * (n - 1)))


@dataclass
class PochhammerBasis:
    """phi_n(x) = (-1)^n (-x)_n = x(x-1)...(x-n+1), monic of degree n."""

    N: int
    elements: list[Poly] = field(init=False, repr=False)

    def __post_init__(self):
        self.elements = [falling_x(n) for n in range(self.N + 2)]

    def __getitem__(self, n: int) -> Poly:
        return self.elements[n]

    def expand(self, p: Poly) -> list[Fraction]:
        return expand_in_monic_basis(p, self.elements)


def expand_in_monic_basis(p: Poly, basis: list[Poly]) -> list[Fraction]:
    """Coefficients c with p = sum c_k basis[k], basis[k] monic of degree k.

    Unitriangular back-substitution from the top degree down; no divisions.
    """
    if p.is_zero():
        return []
    deg = p.degree
    if deg >= len(basis):
        raise ValueError(f"degree {deg} exceeds the available basis")
    out = [Fraction(0)] * (deg + 1)
    rem = p
    for k in range(deg, -1, -1):
        c = rem.coeff(k)
        out[k] = c
        if c:
            rem = rem - basis[k] * c
    assert rem.is_zero()
    return out


def degree_raise_check(W: ShiftOp, N: int, p: HeunParams | None = None) -> tuple[bool, dict]:
    """deg(W x^n) = n + 1 for n = 0..N-1, with leading coefficient sigma1(n)
    when the parameters are known (read off W otherwise)."""
    if p is None:
        p = match_heun_template(W, N)
    rows = []
    ok = True
    for n in range(N):
        image = W.apply_poly(Poly.monomial(n))
        deg = image.degree
        lead = image.coeff(n + 1)
        predicted = sigma1(p, N, n) if p is not None else None
        good = deg == n + 1 and (predicted is None or lead == predicted)
        ok = ok and good
        rows.append({
            "n": n,
            "degree": None if deg == NEG_INF else deg,
            "leading": format_rational(lead),
            "predicted": None if predicted is None else format_rational(predicted),
            "ok": good,
        })
    return ok, {"ok": ok, "rows": rows, "template_matched": p is not None}


@dataclass
class TridiagCoeffs:
    sigma1: list[Fraction]
    sigma2: list[Fraction]
    sigma3: list[Fraction]
    matches: dict[str, list[int]]  # indices n where a closed form disagrees

    @property
    def ok(self) -> bool:
        return not any(self.matches.values())

    def to_json(self) -> dict:
        return {
            "sigma1": [format_rational(v) for v in self.sigma1],
            "sigma2": [format_rational(v) for v in self.sigma2],
            "sigma3": [format_rational(v) for v in self.sigma3],
            "closed_form_mismatches": self.matches,
            "ok": self.ok,
        }


ClosedForm = Callable[[HeunParams, int, int], Fraction]


def pochhammer_tridiag(
    W: ShiftOp,
    basis: PochhammerBasis,
    p: HeunParams | None = None,
) -> TridiagCoeffs:
    """Expand W phi_n for n = 0..N and compare the bands with the closed forms.

    Raises TridiagonalityError on any coefficient outside the three bands.
    """
    N = basis.N
    if p is None:
        p = match_heun_template(W, N)
        if p is None:
            raise ValueError("operator is not of Heun-Hahn form on this grid")
    forms: dict[str, ClosedForm] = {"sigma1": sigma1, "sigma2": sigma2, "sigma3": sigma3}
    bands: dict[str, list[Fraction]] = {k: [] for k in forms}
    mismatches: dict[str, list[int]] = {k: [] for k in forms}
    for n in range(N + 1):
        c = basis.expand(W.apply_poly(basis[n]))
        for k, v in enumerate(c):
            if v != 0 and abs(k - n) > 1:
                raise TridiagonalityError(n, k, v)
        get = lambda k: c[k] if 0 <= k < len(c) else Fraction(0)
        observed = {"sigma1": get(n + 1), "sigma2": get(n), "sigma3": get(n - 1)}
        for name, form in forms.items():
            bands[name].append(observed[name])
            if observed[name] != form(p, N, n):
                mismatches[name].append(n)
    return TridiagCoeffs(bands["sigma1"], bands["sigma2"], bands["sigma3"], mismatches)


def restricted_matrix(p: HeunParams, N: int, M: int) -> list[list[Fraction]]:
    """Matrix of W on span{phi_0..phi_M}; column j holds the expansion of W phi_j."""
    a = [[Fraction(0)] * (M + 1) for _ in range(M + 1)]
    for j in range(M + 1):
        a[j][j] = sigma2(p, N, j)
        if j > 0:
            a[j - 1][j] = sigma3(p, N, j)
        if j < M:
            a[j + 1][j] = sigma1(p, N, j)
    return a


@dataclass
class QESResult:
    M: int
    matrix: list[list[Fraction]]
    charpoly: Poly
    kernel: list[Poly]
    sigma1_at_M: Fraction
    sigma1_at_M_plus_1: Fraction

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "matrix": [[format_rational(v) for v in row] for row in self.matrix],
            "charpoly": self.charpoly.to_json(),
            "kernel": [k.to_json() for k in self.kernel],
            "sigma1_at_M": format_rational(self.sigma1_at_M),
            "sigma1_at_M_plus_1": format_rational(self.sigma1_at_M_plus_1),
        }


def qes_truncate(p: HeunParams, N: int, M: int) -> QESResult:
    """Restrict W to polynomials of degree <= M and solve W psi = 0 there.

    Requires the coefficient of phi_{M+1} in W phi_M, sigma1(M), to vanish.
    Every kernel element is re-checked by applying W symbolically.
    """
    if not 0 < M < N:
        raise ValueError(f"need 0 < M < N, got M={M}, N={N}")
    s1 = sigma1(p, N, M)
    if s1 != 0:
        raise TruncationError(
            f"truncation condition fails: coefficient of phi_{M + 1} in W phi_{M} "
            f"is {format_rational(s1)}"
        )
    basis = PochhammerBasis(N)
    W = build_heun_hahn(p, N)
    # the matrix is rebuilt from the operator, not from the closed forms
    a = [[Fraction(0)] * (M + 1) for _ in range(M + 1)]
    for j in range(M + 1):
        c = basis.expand(W.apply_poly(basis[j]))
        if len(c) > M + 1:
            raise TruncationError(f"W phi_{j} leaves the degree <= {M} subspace")
        for i, v in enumerate(c):
            a[i][j] = v
    kernel = []
    for v in linalg.nullspace(a, M + 1):
        psi = sum((basis[i] * c for i, c in enumerate(v)), Poly())
        if not W.apply_poly(psi).is_zero():
            raise ArithmeticError("kernel vector does not satisfy W psi = 0")
        kernel.append(psi)
    return QESResult(M, a, linalg.tridiagonal_charpoly(a), kernel, s1, sigma1(p, N, M + 1))


def _linear_map(fn: Callable[[HeunParams], Fraction]) -> list[Fraction]:
    """Row vector of a function that is linear in the seven parameters."""
    names = HeunParams.names()
    return [fn(HeunParams(**{m: int(m == n) for m in names})) for n in names]


def engineer_qes_params(N: int, M: int, rng: random.Random, kernel_vector=None) -> HeunParams:
    """Random parameters with sigma1(M) = 0 and a prescribed kernel vector.

    All sigma's are linear in the parameters, so both conditions are linear
    equations; a random point of the solution space is returned.
    """
    if kernel_vector is None:
        kernel_vector = [Fraction(rng.randint(-5, 5)) for _ in range(M)] + [Fraction(1)]
    v = [rational(c) for c in kernel_vector]
    rows = [_linear_map(lambda q: sigma1(q, N, M))]
    for i in range(M + 1):
        def row_i(q, i=i):
            return sum((restricted_matrix(q, N, M)[i][j] * v[j] for j in range(M + 1)),
                       Fraction(0))
        rows.append(_linear_map(row_i))
    null = linalg.nullspace(rows, 7)
    while True:
        weights = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in null]
        vec = [sum((w * b[k] for w, b in zip(weights, null)), Fraction(0)) for k in range(7)]
        if any(vec):
            return HeunParams.from_vector(vec)


def converse_tridiagonal_family(N: int) -> tuple[int, bool]:
    """Solve for all operators a1 T^+ + a2 T^- + a0 I with cubic coefficients
    that are admissible on {0..N} and tridiagonal on phi_0, phi_1, phi_2.

    Returns the dimension of the solution space and whether every basis
    element matches the Heun-Hahn template.
    """
    basis = PochhammerBasis(N)

    def op_from(v) -> ShiftOp:
        return ShiftOp.second_order(Poly(v[0:4]), Poly(v[4:8]), Poly(v[8:12]))

    def constraints(v) -> list[Fraction]:
        W = op_from(v)
        eqs = []
        for n in range(3):
            image = W.apply_poly(basis[n])
            # components on phi_k with |k - n| > 1: top degrees and phi_0 for n = 2
            c = [image.coeff(k) for k in range(n + 2, 7)]
            eqs.extend(c)
            if n == 2:
                eqs.append(image(0))
        eqs.append(W.coeff(1)(N))
        return eqs

    unit = [[Fraction(int(i == j)) for i in range(12)] for j in range(12)]
    columns = [constraints(e) for e in unit]
    rows = [list(r) for r in zip(*columns)]
    null = linalg.nullspace(rows, 12)
    matched = all(match_heun_template(op_from(v), N) is not None for v in null)
    return len(null), matched
