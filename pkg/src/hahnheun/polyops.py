"""Univariate polynomials and rational functions over Q, and differential
operators with polynomial coefficients.

A :class:`Poly` is a dense, immutable tuple of Fractions, lowest degree
first, with no trailing zeros; the zero polynomial is the empty tuple and
has degree ``-inf``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactnum import RationalLike, format_rational, rational

NEG_INF = -math.inf


def _strip(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        self.coeffs = _strip([rational(c) for c in coeffs])

    @classmethod
    def const(cls, c: RationalLike) -> "Poly":
        return cls((c,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, n: int, c: RationalLike = 1) -> "Poly":
        return cls([0] * n + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike], lead: RationalLike = 1) -> "Poly":
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-rational(r), 1))
        return p

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    # arithmetic

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(c * other for c in self.coeffs)
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        """Evaluate by Horner's rule; ``x`` may be a scalar or a Poly."""
        if isinstance(x, Poly):
            result = Poly()
            for c in reversed(self.coeffs):
                result = result * x + c
            return result
        x = rational(x)
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def scale(self, c: RationalLike) -> "Poly":
        return self * rational(c)

    def shift(self, c: RationalLike) -> "Poly":
        """Return p(x + c), by repeated synthetic division (Taylor shift)."""
        c = rational(c)
        if c == 0 or len(self.coeffs) < 2:
            return self
        a = list(self.coeffs)
        n = len(a)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] += c * a[j + 1]
        return Poly(a)

    def deriv(self, k: int = 1) -> "Poly":
        coeffs = self.coeffs
        for _ in range(k):
            coeffs = tuple(i * c for i, c in enumerate(coeffs))[1:]
        return Poly(coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv = 1 / other.lead
        for i in range(len(rem) - 1, dq - 1, -1):
            q = rem[i] * inv
            quot[i - dq] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= q * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_poly(other))[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(rational(c) for c in data)

    def __repr__(self):
        return f"Poly({self.to_json()})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                s = mono
            elif mono and c == -1:
                s = "-" + mono
            else:
                cs = format_rational(c)
                if mono and "/" in cs:
                    cs = f"({cs})"
                s = cs + ("*" + mono if mono else "")
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")


def _as_poly(value) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.const(value)
    return NotImplemented


X = Poly.x()
ONE = Poly.const(1)
ZERO = Poly()


def poly_arith(p: Poly, q: Poly, op: str) -> Poly:
    if op == "+":
        return p + q
    if op == "-":
        return p - q
    if op == "*":
        return p * q
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_shift(p: Poly, c: RationalLike) -> Poly:
    return p.shift(c)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    while not q.is_zero():
        p, q = q, p % q
    return p.monic()


def rising(base: Poly, n: int) -> Poly:
    """Polynomial Pochhammer (base)_n = base (base+1) ... (base+n-1)."""
    result = ONE
    for k in range(n):
        result = result * (base + k)
    return result


def falling_x(n: int) -> Poly:
    """x(x-1)...(x-n+1), i.e. (-1)^n (-x)_n."""
    return Poly.from_roots(range(n))


class RatFunc:
    """Reduced quotient num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | RationalLike, den: Poly | RationalLike = 1):
        num = _as_poly(num if isinstance(num, Poly) else rational(num))
        den = _as_poly(den if isinstance(den, Poly) else rational(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.lead
        self.num, self.den = num * (1 / lead), den * (1 / lead)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other):
        return _as_ratfunc(other) - self

    def __mul__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = _as_ratfunc(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def shift(self, c: RationalLike) -> "RatFunc":
        return RatFunc(self.num.shift(c), self.den.shift(c))

    def __call__(self, x: RationalLike) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at x={format_rational(x)}")
        return self.num(x) / d

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self):
        return f"RatFunc({self.num}, {self.den})"


def _as_ratfunc(value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, Poly):
        return RatFunc(value)
    if isinstance(value, (int, Fraction)):
        return RatFunc(value)
    raise TypeError(f"cannot interpret {value!r} as a rational function")


class DiffOp:
    """sum_k p_k(x) d^k/dx^k with polynomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Poly | RationalLike] | None = None):
        clean = {}
        for k, p in (terms or {}).items():
            if k < 0:
                raise ValueError("derivative order must be nonnegative")
            p = p if isinstance(p, Poly) else Poly.const(p)
            if not p.is_zero():
                clean[int(k)] = p
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls({0: ONE})

    @classmethod
    def mul(cls, p: Poly | RationalLike) -> "DiffOp":
        return cls({0: p})

    @classmethod
    def d(cls, k: int = 1) -> "DiffOp":
        return cls({k: ONE})

    @property
    def order(self) -> float | int:
        return max(self.terms) if self.terms else NEG_INF

    def coeff(self, k: int) -> Poly:
        return self.terms.get(k, ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def apply(self, p: Poly) -> Poly:
        out = ZERO
        for k, c in self.terms.items():
            out = out + c * p.deriv(k)
        return out

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return DiffOp(out)

    def __neg__(self):
        return DiffOp({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, c: RationalLike) -> "DiffOp":
        c = rational(c)
        return DiffOp({k: p * c for k, p in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, DiffOp):
            return diffop_compose(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def to_json(self) -> dict:
        return {str(k): c.to_json() for k, c in self.terms.items()}

    def __repr__(self):
        return "DiffOp(" + ", ".join(f"d^{k}: {c}" for k, c in self.terms.items()) + ")"


def diffop_apply(D: DiffOp, p: Poly) -> Poly:
    return D.apply(p)


def diffop_from_action(action, order: int) -> DiffOp:
    """Recover the unique operator of order <= ``order`` from its action on
    1, x, ..., x^order.

    With c_k the coefficient of d^k, action(x^j) = sum_k c_k j!/(j-k)! x^(j-k),
    which is triangular in k.
    """
    coeffs: list[Poly] = []
    for j in range(order + 1):
        image = action(Poly.monomial(j))
        for k, c in enumerate(coeffs):
            image = image - c * Poly.monomial(j - k, math.perm(j, k))
        coeffs.append(image * Fraction(1, math.factorial(j)))
    return DiffOp(dict(enumerate(coeffs)))


def diffop_compose(D1: DiffOp, D2: DiffOp) -> DiffOp:
    """D1 o D2, rebuilt from the action of the product on monomials."""
    if D1.is_zero() or D2.is_zero():
        return DiffOp()
    order = D1.order + D2.order
    return diffop_from_action(lambda p: D1.apply(D2.apply(p)), order)


def diffop_commutator(D1: DiffOp, D2: DiffOp) -> DiffOp:
    return diffop_compose(D1, D2) - diffop_compose(D2, D1)


def ordinary_heun_degree_check(D: DiffOp, n_max: int) -> tuple[bool, dict]:
    """Check that D sends x^n to degree <= n+1 for all n <= n_max.

    The report lists the failing n and flags the operator as degenerate when
    degree n+1 is never attained.
    """
    failures = []
    attained = []
    degrees = []
    for n in range(n_max + 1):
        image = D.apply(Poly.monomial(n))
        deg = image.degree
        degrees.append(None if deg == NEG_INF else deg)
        if deg > n + 1:
            failures.append({"n": n, "degree": deg})
        elif deg == n + 1:
            attained.append(n)
    ok = not failures
    report = {
        "ok": ok,
        "degrees": degrees,
        "failures": failures,
        "raises_degree_at": attained,
        "degenerate": ok and not attained,
    }
    return ok, report
