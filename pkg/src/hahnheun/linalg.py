"""Exact dense linear algebra over Q.

Elimination is fraction-free (Bareiss): each row is first cleared of
denominators, and all subsequent steps stay in the integers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .polyops import Poly

Matrix = Sequence[Sequence[Fraction]]


def _integer_rows(rows: Matrix) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(v) for v in row]
        den = math.lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * den) for v in row])
    return out


def echelon(rows: Matrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form. Returns integer rows and pivot columns."""
    a = _integer_rows(rows)
    m = len(a)
    n = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, m):
            f = a[i][c]
            a[i] = [(piv * a[i][j] - f * a[r][j]) // prev for j in range(n)]
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(rows: Matrix) -> int:
    return len(echelon(rows)[1])


def nullspace(rows: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : A v = 0}, one vector per free column (free entry = 1)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    ech, pivots = echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            s = sum((ech[r][j] * v[j] for j in range(c + 1, ncols)), Fraction(0))
            v[c] = -s / ech[r][c]
        basis.append(v)
    return basis


class InconsistentSystem(ArithmeticError):
    pass


def solve(rows: Matrix, rhs: Sequence[Fraction]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Solve A v = b. Returns one particular solution and a nullspace basis.

    Raises InconsistentSystem when no solution exists.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs)]
    ech, pivots = echelon(aug)
    if ncols in pivots:
        raise InconsistentSystem("linear system has no solution")
    v = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        s = sum((ech[r][j] * v[j] for j in range(c + 1, ncols)), Fraction(0))
        v[c] = (ech[r][ncols] - s) / ech[r][c]
    return v, nullspace(rows, ncols)


def matvec(rows: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in rows]


def tridiagonal_charpoly(rows: Matrix) -> Poly:
    """det(t I - A) for a tridiagonal A by the three-term recurrence."""
    n = len(rows)
    t = Poly.x()
    prev, cur = Poly.const(1), t - rows[0][0] if n else Poly.const(1)
    for k in range(1, n):
        prev, cur = cur, (t - rows[k][k]) * cur - prev * (rows[k][k - 1] * rows[k - 1][k])
    return cur


def charpoly(rows: Matrix) -> Poly:
    """det(t I - A) by the Faddeev-LeVerrier recursion (any square A)."""
    n = len(rows)
    a = [[Fraction(v) for v in row] for row in rows]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum((a[i][l] * m[l][j] for l in range(n)), Fraction(0)) for j in range(n)]
              for i in range(n)]
        for i in range(n):
            am[i][i] += coeffs[n - k + 1]
        m = am
        trace = sum((sum((a[i][l] * m[l][i] for l in range(n)), Fraction(0))
                     for i in range(n)), Fraction(0))
        coeffs[n - k] = -trace / k
    return Poly(coeffs)
