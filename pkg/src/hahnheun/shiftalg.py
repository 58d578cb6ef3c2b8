"""Difference operators sum_k c_k(x) T^k with polynomial coefficients.

``T^k f(x) = f(x + k)``. Products follow (a T^j)(b T^k) = a(x) b(x+j) T^(j+k).
Identities are always checked on this symbolic form; :class:`GridMatrix`
is only the finite realization on {0, ..., N}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exactnum import RationalLike, format_rational, rational
from .polyops import ONE, ZERO, Poly, RatFunc


class BoundaryError(ValueError):
    """A shift would reach outside the grid with a nonzero coefficient."""

    def __init__(self, shift: int, point: int, value: Fraction):
        self.shift = shift
        self.point = point
        self.value = value
        super().__init__(
            f"coefficient of T^{shift} is {format_rational(value)} at grid point "
            f"x={point}, but x+{shift} lies outside the grid"
        )


class ShiftOp:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Poly | RationalLike] | None = None):
        clean = {}
        for k, p in (terms or {}).items():
            p = p if isinstance(p, Poly) else Poly.const(p)
            if not p.is_zero():
                clean[int(k)] = p
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def identity(cls) -> "ShiftOp":
        return cls({0: ONE})

    @classmethod
    def mul(cls, p: Poly | RationalLike) -> "ShiftOp":
        """Multiplication operator by p(x)."""
        return cls({0: p})

    @classmethod
    def T(cls, k: int = 1) -> "ShiftOp":
        return cls({k: ONE})

    @classmethod
    def second_order(cls, a1: Poly, a2: Poly, a0: Poly) -> "ShiftOp":
        """a1 T^+ + a2 T^- + a0 I."""
        return cls({1: a1, -1: a2, 0: a0})

    def coeff(self, k: int) -> Poly:
        return self.terms.get(k, ZERO)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def apply_poly(self, p: Poly) -> Poly:
        out = ZERO
        for k, c in self.terms.items():
            out = out + c * p.shift(k)
        return out

    def apply_ratfunc(self, f: RatFunc) -> RatFunc:
        out = RatFunc(0)
        for k, c in self.terms.items():
            out = out + RatFunc(c) * f.shift(k)
        return out

    def __add__(self, other):
        other = _as_shiftop(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return ShiftOp(out)

    __radd__ = __add__

    def __neg__(self):
        return ShiftOp({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_shiftop(other))

    def __rsub__(self, other):
        return _as_shiftop(other) - self

    def scale(self, c: RationalLike) -> "ShiftOp":
        c = rational(c)
        return ShiftOp({k: p * c for k, p in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, ShiftOp):
            return shiftop_compose(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "ShiftOp":
        result = ShiftOp.identity()
        for _ in range(n):
            result = shiftop_compose(result, self)
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ShiftOp.mul(other)
        if not isinstance(other, ShiftOp):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def to_json(self) -> dict:
        return {str(k): c.to_json() for k, c in self.terms.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, list]) -> "ShiftOp":
        return cls({int(k): Poly.from_json(v) for k, v in data.items()})

    def __repr__(self):
        return "ShiftOp(" + ", ".join(f"T^{k}: {c}" for k, c in self.terms.items()) + ")"


def _as_shiftop(value) -> ShiftOp:
    if isinstance(value, ShiftOp):
        return value
    if isinstance(value, (int, Fraction, Poly)):
        return ShiftOp.mul(value)
    raise TypeError(f"cannot interpret {value!r} as a shift operator")


def shiftop_apply_poly(W: ShiftOp, p: Poly) -> Poly:
    return W.apply_poly(p)


def shiftop_apply_ratfunc(W: ShiftOp, f: RatFunc) -> RatFunc:
    return W.apply_ratfunc(f)


def shiftop_compose(W1: ShiftOp, W2: ShiftOp) -> ShiftOp:
    out: dict[int, Poly] = {}
    for j, a in W1.terms.items():
        for k, b in W2.terms.items():
            out[j + k] = out.get(j + k, ZERO) + a * b.shift(j)
    return ShiftOp(out)


def commutator(W1: ShiftOp, W2: ShiftOp) -> ShiftOp:
    return shiftop_compose(W1, W2) - shiftop_compose(W2, W1)


def anticommutator(W1: ShiftOp, W2: ShiftOp) -> ShiftOp:
    return shiftop_compose(W1, W2) + shiftop_compose(W2, W1)


@dataclass(frozen=True)
class GridMatrix:
    """Entry (i, j) is the coefficient of f(j) in (W f)(i), for i, j in 0..N."""

    N: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def identity(cls, N: int) -> "GridMatrix":
        return cls(N, tuple(
            tuple(Fraction(int(i == j)) for j in range(N + 1)) for i in range(N + 1)
        ))

    def __matmul__(self, other: "GridMatrix") -> "GridMatrix":
        if self.N != other.N:
            raise ValueError("grid sizes differ")
        n = self.N + 1
        cols = list(zip(*other.entries))
        return GridMatrix(self.N, tuple(
            tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
            for row in self.entries
        ))

    def apply(self, values) -> list[Fraction]:
        return [sum((a * rational(v) for a, v in zip(row, values)), Fraction(0))
                for row in self.entries]

    def to_json(self) -> list[list[str]]:
        return [[format_rational(v) for v in row] for row in self.entries]


def check_boundary(W: ShiftOp, N: int) -> None:
    """Raise BoundaryError unless every shift stays inside {0..N} wherever
    its coefficient is nonzero. Checked by evaluation at the boundary points."""
    for k, c in W.terms.items():
        if k < 0:
            points = range(0, min(-k, N + 1))
        elif k > 0:
            points = range(max(N - k + 1, 0), N + 1)
        else:
            continue
        for x in points:
            v = c(x)
            if v != 0:
                raise BoundaryError(k, x, v)


def is_admissible(W: ShiftOp, N: int) -> bool:
    try:
        check_boundary(W, N)
    except BoundaryError:
        return False
    return True


def to_grid_matrix(W: ShiftOp, N: int) -> GridMatrix:
    if N < 1:
        raise ValueError("N must be a positive integer")
    check_boundary(W, N)
    rows = []
    for i in range(N + 1):
        row = [Fraction(0)] * (N + 1)
        for k, c in W.terms.items():
            j = i + k
            if 0 <= j <= N:
                row[j] += c(i)
        rows.append(tuple(row))
    return GridMatrix(N, tuple(rows))
