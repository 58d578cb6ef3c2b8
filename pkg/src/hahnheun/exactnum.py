"""Exact scalar arithmetic: rationals, Pochhammer symbols, terminating 3F2 sums.

Rationals are plain :class:`fractions.Fraction` values, which are always
stored reduced with a positive denominator.
"""

from __future__ import annotations

import operator
import re
from fractions import Fraction
from typing import Sequence, Union

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
}


class HypergeometricError(ArithmeticError):
    """A denominator Pochhammer vanished before the series terminated."""

    def __init__(self, k: int, parameter: Fraction):
        self.k = k
        self.parameter = parameter
        super().__init__(
            f"denominator Pochhammer vanishes at k={k} "
            f"(parameter {format_rational(parameter)})"
        )


def rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; anything else raises ValueError."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational {text!r} (expected 'p/q' or 'p')")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"malformed rational {text!r}: zero denominator")
    return Fraction(num, den)


def format_rational(value: RationalLike) -> str:
    q = rational(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction:
    """Apply one of ``+ - * /`` exactly. Division by zero raises ZeroDivisionError."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    a, b = rational(a), rational(b)
    if op == "/" and b == 0:
        raise ZeroDivisionError(f"{format_rational(a)} / 0")
    return fn(a, b)


def pochhammer(a: RationalLike, n: int) -> Fraction:
    """Rising factorial (a)_n = a(a+1)...(a+n-1); (a)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer index must be nonnegative")
    a = rational(a)
    result = Fraction(1)
    for k in range(n):
        result *= a + k
        if result == 0:
            break
    return result


def hyp3f2_terminating(
    num: Sequence[RationalLike],
    den: Sequence[RationalLike],
    upper: int,
) -> Fraction:
    """Terminating 3F2(num; den; 1) summed for k = 0..upper.

    The sum stops as soon as a numerator factor vanishes. A vanishing
    denominator factor met before that raises :class:`HypergeometricError`.
    """
    if len(num) != 3 or len(den) != 2:
        raise ValueError("3F2 needs three numerator and two denominator parameters")
    a, b, c = (rational(v) for v in num)
    d, e = (rational(v) for v in den)
    term = Fraction(1)
    total = Fraction(1)
    for k in range(upper):
        top = (a + k) * (b + k) * (c + k)
        if top == 0:
            return total
        for p in (d, e):
            if p + k == 0:
                raise HypergeometricError(k + 1, p)
        term = term * top / ((d + k) * (e + k) * (k + 1))
        total += term
    return total
