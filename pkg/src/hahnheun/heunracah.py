"""Algebra generated by the Heun operator W together with Y (or X).

Structure constants are fitted by exact linear algebra on the symbolic
operator coefficients: every (shift or derivative order, power of x) pair
of a relation gives one linear equation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .exactnum import format_rational, rational
from .hahn import (HahnParams, Taus, build_X, build_Y, compose_bilinear)
from .polyops import NEG_INF, X, DiffOp, Poly, ordinary_heun_degree_check
from .shiftalg import ShiftOp, anticommutator, commutator, shiftop_compose

Operator = ShiftOp | DiffOp
Relation = tuple[Operator, Mapping[str, Operator]]


def _coords(op: Operator) -> dict[tuple[int, int], Fraction]:
    return {(k, i): c for k, p in op.terms.items() for i, c in enumerate(p.coeffs) if c}


class RelationFails(ArithmeticError):
    def __init__(self, result: "FitResult"):
        self.result = result
        super().__init__("relation fails: no choice of constants gives a zero residual")


class NonUniqueFit(ArithmeticError):
    def __init__(self, result: "FitResult"):
        self.result = result
        super().__init__(f"non-unique fit, null directions: {result.null_json()}")


@dataclass
class FitResult:
    names: list[str]
    values: dict[str, Fraction]
    null: list[dict[str, Fraction]]
    consistent: bool
    residuals: list[Operator] = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return self.consistent and not self.null

    @property
    def residual_zero(self) -> bool:
        return all(r.is_zero() for r in self.residuals)

    def null_json(self) -> list[dict[str, str]]:
        return [{k: format_rational(v) for k, v in d.items() if v} for d in self.null]

    def to_json(self) -> dict:
        return {
            "values": {k: format_rational(v) for k, v in self.values.items()},
            "consistent": self.consistent,
            "unique": self.unique,
            "null_directions": self.null_json(),
            "residual_zero": self.residual_zero,
            "residuals": [r.to_json() for r in self.residuals if not r.is_zero()],
        }


def fit_relation(relations: Sequence[Relation], strict: bool = False) -> FitResult:
    """Find constants c with lhs = sum c[name] * op for every relation at once.

    Names shared between relations share one unknown. An inconsistent system
    is fitted greedily on a maximal consistent subset of the equations so the
    reported residual shows where the relation breaks.
    """
    names: list[str] = []
    for _, basis in relations:
        for name in basis:
            if name not in names:
                names.append(name)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for lhs, basis in relations:
        coords = {name: _coords(op) for name, op in basis.items()}
        target = _coords(lhs)
        keys = set(target)
        for c in coords.values():
            keys |= set(c)
        for key in sorted(keys):
            rows.append([coords[n].get(key, Fraction(0)) if n in coords else Fraction(0)
                         for n in names])
            rhs.append(target.get(key, Fraction(0)))

    consistent = True
    try:
        sol, null = linalg.solve(rows, rhs) if rows else ([Fraction(0)] * len(names), [])
    except linalg.InconsistentSystem:
        consistent = False
        keep_rows, keep_rhs = [], []
        for r, b in zip(rows, rhs):
            try:
                linalg.solve(keep_rows + [r], keep_rhs + [b])
            except linalg.InconsistentSystem:
                continue
            keep_rows.append(r)
            keep_rhs.append(b)
        sol, null = linalg.solve(keep_rows, keep_rhs) if keep_rows else (
            [Fraction(0)] * len(names), [])
    if not rows:
        null = [[Fraction(int(i == j)) for i in range(len(names))] for j in range(len(names))]
    values = dict(zip(names, sol))
    residuals = []
    for lhs, basis in relations:
        r = lhs
        for name, op in basis.items():
            r = r - op * values[name]
        residuals.append(r)
    result = FitResult(names, values, [dict(zip(names, v)) for v in null], consistent, residuals)
    if strict:
        if not consistent or not result.residual_zero:
            raise RelationFails(result)
        if null:
            raise NonUniqueFit(result)
    return result


# Y-W relations

def e_closed_forms(t: Taus, h: HahnParams) -> tuple[Fraction, Fraction]:
    """Coefficients (e1, e2) of Y^2 and Y^3 in the second Y-W relation."""
    a, b, N = h.alpha, h.beta, h.N
    s = t.tau1 + t.tau2
    e2 = 2 * s ** 2
    e1 = (6 * t.tau4 ** 2 + 3 * s * (t.tau3 + (2 * N + b - a) * t.tau4)
          - (t.tau1 ** 2 + t.tau2 ** 2) * (3 * N * (a + 1) - 2)
          - 2 * (3 * N * (a + 1) - 5) * t.tau1 * t.tau2)
    return e1, e2


@dataclass
class StructureConstants:
    values: dict[str, Fraction]
    solvable: dict[str, bool]
    fits: dict[str, FitResult]

    def __getitem__(self, name: str) -> Fraction:
        return self.values[name]

    def to_json(self) -> dict:
        return {
            "constants": {k: format_rational(v) for k, v in self.values.items()},
            "solvable": self.solvable,
            "fits": {k: v.to_json() for k, v in self.fits.items()},
        }


def fit_heun_racah(Y: ShiftOp, W: ShiftOp, strict: bool = True) -> StructureConstants:
    """Fit g1..g7, e1, e2 in

        [Y,[Y,W]] = g1 Y^2 + g2 {Y,W} + g3 Y + g4 W + g5
        [W,[W,Y]] = e1 Y^2 + e2 Y^3 + g2 W^2 + g1 {Y,W} + g3 W + g6 Y + g7
    """
    I = ShiftOp.identity()
    Y2 = shiftop_compose(Y, Y)
    YW = anticommutator(Y, W)
    fit1 = fit_relation([(commutator(Y, commutator(Y, W)),
                          {"g1": Y2, "g2": YW, "g3": Y, "g4": W, "g5": I})], strict=strict)
    g = fit1.values
    lhs2 = (commutator(W, commutator(W, Y)) - shiftop_compose(W, W) * g["g2"]
            - YW * g["g1"] - W * g["g3"])
    fit2 = fit_relation([(lhs2, {"e1": Y2, "e2": shiftop_compose(Y2, Y), "g6": Y, "g7": I})],
                        strict=strict)
    values = {**fit1.values, **fit2.values}
    order = ["g1", "g2", "g3", "g4", "g5", "g6", "g7", "e1", "e2"]
    return StructureConstants(
        {k: values[k] for k in order},
        {"RH1": fit1.unique and fit1.residual_zero, "RH2": fit2.unique and fit2.residual_zero},
        {"RH1": fit1, "RH2": fit2},
    )


def fit_xw_relations(Xop: ShiftOp, W: ShiftOp, strict: bool = True) -> StructureConstants:
    """Fit g8..g15, e3..e6 in

        [X,[X,W]] = e3 X^3 + g8 X^2 + g9 {X,W} + g10 X + g11 W + g12
        [W,[W,X]] = e4 X^2 + e5 X^3 + e6 XWX + g9 W^2 + g8 {X,W} + g13 X + g14 W + g15
    """
    I = ShiftOp.identity()
    X2 = shiftop_compose(Xop, Xop)
    X3 = shiftop_compose(X2, Xop)
    XW = anticommutator(Xop, W)
    fit1 = fit_relation([(commutator(Xop, commutator(Xop, W)),
                          {"e3": X3, "g8": X2, "g9": XW, "g10": Xop, "g11": W, "g12": I})],
                        strict=strict)
    g = fit1.values
    lhs2 = commutator(W, commutator(W, Xop)) - shiftop_compose(W, W) * g["g9"] - XW * g["g8"]
    fit2 = fit_relation([(lhs2, {"e4": X2, "e5": X3,
                                 "e6": shiftop_compose(shiftop_compose(Xop, W), Xop),
                                 "g13": Xop, "g14": W, "g15": I})], strict=strict)
    values = {**fit1.values, **fit2.values}
    order = ["g8", "g9", "g10", "g11", "g12", "g13", "g14", "g15", "e3", "e4", "e5", "e6"]
    return StructureConstants(
        {k: values[k] for k in order},
        {"RXW1": fit1.unique and fit1.residual_zero, "RXW2": fit2.unique and fit2.residual_zero},
        {"RXW1": fit1, "RXW2": fit2},
    )


def racah_conditions(t: Taus) -> tuple[bool, int | None]:
    """Whether tau1 + tau2 = 0 and tau4 = s * tau2 for a sign s.

    ``which_sign`` is s; it is None when the conditions fail or when
    tau2 = tau4 = 0, where both signs hold.
    """
    if t.tau1 + t.tau2 != 0:
        return False, None
    plus, minus = t.tau4 == t.tau2, t.tau4 == -t.tau2
    if plus and minus:
        return True, None
    if plus:
        return True, 1
    if minus:
        return True, -1
    return False, None


def random_hahn_params(rng: random.Random, N: int | None = None) -> HahnParams:
    while True:
        h = HahnParams(small_rational(rng), small_rational(rng),
                       N if N is not None else rng.randint(2, 8))
        if not h.problems():
            return h


def small_rational(rng: random.Random, bound: int = 12) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def degeneration_check(t: Taus, samples: int = 3, seed: int = 0) -> dict:
    """Report the degeneration conditions and compare them with fitted e1, e2
    on random Hahn parameters: e1 = e2 = 0 must hold exactly when they do."""
    is_racah, sign = racah_conditions(t)
    rng = random.Random(seed)
    rows = []
    agree = True
    for _ in range(samples):
        h = random_hahn_params(rng, rng.randint(3, 6))
        W = compose_bilinear(t, build_X(), build_Y(h))
        sc = fit_heun_racah(build_Y(h), W, strict=False)
        vanish = sc["e1"] == 0 and sc["e2"] == 0
        agree = agree and vanish == is_racah
        rows.append({"hahn": h.to_json(), "e1": format_rational(sc["e1"]),
                     "e2": format_rational(sc["e2"]), "extra_terms_vanish": vanish})
    return {"is_racah": is_racah, "which_sign": sign, "iff_consistent": agree, "samples": rows}


@dataclass
class RacahTriple:
    h: HahnParams
    gamma: Fraction
    epsilon: Fraction
    Y: ShiftOp
    W1: ShiftOp
    W2: ShiftOp
    checks: dict[str, bool]


def racah_triple_explicit(h: HahnParams, gamma: Fraction, epsilon: Fraction) -> tuple[ShiftOp, ShiftOp]:
    a, b, N = h.alpha, h.beta, h.N
    w1 = ShiftOp({1: (X + a + 1) * (Poly.const(N) - X),
                  0: Poly((epsilon - N * (a + 1) / 2, (a - b) / 2 - N + gamma, 1))})
    w2 = ShiftOp({-1: X * (Poly.const(b + N + 1) - X),
                  0: Poly((-epsilon - N * (a + 1) / 2, -gamma - N + (a - b) / 2, 1))})
    return w1, w2


def build_racah_triple(h: HahnParams, gamma, epsilon) -> RacahTriple:
    gamma, epsilon = rational(gamma), rational(epsilon)
    Xop, Yop = build_X(), build_Y(h)
    K3 = commutator(Xop, Yop)
    I = ShiftOp.identity()
    half = Fraction(1, 2)
    w1 = K3 * half + Xop * gamma - Yop * half + I * epsilon
    w2 = -(K3 * half) - Xop * gamma - Yop * half - I * epsilon
    e1, e2 = racah_triple_explicit(h, gamma, epsilon)
    checks = {
        "sum_is_zero": (Yop + w1 + w2).is_zero(),
        "W1_matches_explicit": w1 == e1,
        "W2_matches_explicit": w2 == e2,
    }
    return RacahTriple(h, gamma, epsilon, Yop, w1, w2, checks)


RACAH_NAMES = ("a1", "a2", "b", "c1", "c2", "d1", "d2")


def fit_racah_pair(K1: ShiftOp, K2: ShiftOp, strict: bool = False) -> FitResult:
    """[K2,K3] = a1{K1,K2} + a2 K2^2 + b K2 + c1 K1 + d1,
    [K3,K1] = a1 K1^2 + a2 {K1,K2} + b K1 + c2 K2 + d2, with K3 = [K1,K2]."""
    if K1 == K2:
        raise ValueError("a Racah pair needs two distinct operators")
    K3 = commutator(K1, K2)
    I = ShiftOp.identity()
    K12 = anticommutator(K1, K2)
    return fit_relation([
        (commutator(K2, K3), {"a1": K12, "a2": shiftop_compose(K2, K2), "b": K2,
                              "c1": K1, "d1": I}),
        (commutator(K3, K1), {"a1": shiftop_compose(K1, K1), "a2": K12, "b": K1,
                              "c2": K2, "d2": I}),
    ], strict=strict)


def verify_racah_pairs(triple: RacahTriple) -> tuple[bool, dict]:
    pairs = {"Y,W1": (triple.Y, triple.W1), "Y,W2": (triple.Y, triple.W2),
             "W1,W2": (triple.W1, triple.W2)}
    report = {}
    ok = True
    for name, (a, b) in pairs.items():
        fit = fit_racah_pair(a, b)
        good = fit.unique and fit.residual_zero
        ok = ok and good
        report[name] = {"ok": good, **fit.to_json()}
    return ok, report


# differential realization

def diff_XY(q1: Poly, t1: Poly) -> tuple[DiffOp, DiffOp]:
    """X = x(x-1) d + q1(x),  Y = x(1-x) d^2 + t1(x) d."""
    a = X * (X - 1)
    return DiffOp({1: a, 0: q1}), DiffOp({2: -a, 1: t1})


def pi3_closed_form(t: Taus) -> Poly:
    return X * (X - 1) * Poly((-t.tau1 - t.tau4, 2 * t.tau1))


def differential_realization(q1: Poly, t1: Poly, t: Taus) -> tuple[DiffOp, dict]:
    if q1.degree > 1 or t1.degree > 1:
        raise ValueError("q1 and t1 must have degree <= 1")
    Xd, Yd = diff_XY(q1, t1)
    W = compose_bilinear(t, Xd, Yd)
    order = W.order
    s = t.tau1 + t.tau2
    info: dict = {"order": None if order == NEG_INF else order}
    a = X * (X - 1)
    if s == 0:
        ok_order = order <= 2
        second = W.coeff(2)
        heun_ok, heun_report = ordinary_heun_degree_check(W, 8)
        info.update({
            "kind": "ordinary Heun",
            "second_order_matches_pi3": second == pi3_closed_form(t),
            "degree_check": heun_report,
        })
        ok = ok_order and info["second_order_matches_pi3"] and heun_ok
        if t.tau1 != 0 or t.tau4 != 0:
            ok = ok and order == 2
    else:
        lead_expected = a * a * (-s)
        q, r = W.coeff(2).divmod(a)
        info.update({
            "kind": "third order",
            "leading_matches": W.coeff(3) == lead_expected,
            "second_order_factor": q.to_json() if r.is_zero() else None,
            "first_order_degree": None if W.coeff(1).degree == NEG_INF else W.coeff(1).degree,
            "zeroth_order_degree": None if W.coeff(0).degree == NEG_INF else W.coeff(0).degree,
        })
        ok = (order == 3 and info["leading_matches"] and r.is_zero() and q.degree <= 1
              and W.coeff(1).degree <= 2 and W.coeff(0).degree <= 1)
    info["ok"] = ok
    return W, info
