"""Randomized exact verification suites, one per acceptance criterion.

Every suite returns a :class:`Check`. Sampling is driven by a seeded
``random.Random`` so reports are reproducible.
"""

from __future__ import annotations

import random
import traceback
from contextlib import ExitStack
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable
from unittest import mock

from . import gevp, hahn, heunhahn, heunracah
from .exactnum import format_rational
from .hahn import HahnParams, Taus
from .heunhahn import HeunParams, PochhammerBasis
from .polyops import Poly
from .shiftalg import is_admissible

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "error"
    expected: Any = None
    observed: Any = None
    reference: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "expected": self.expected,
                "observed": self.observed, "reference": self.reference,
                "details": self.details}


def small_rational(rng: random.Random, bound: int = 12) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_heun_params(rng: random.Random) -> HeunParams:
    while True:
        p = HeunParams(*(small_rational(rng) for _ in range(7)))
        if p.r1 != 0:
            return p


def random_taus(rng: random.Random) -> Taus:
    return Taus(*(small_rational(rng) for _ in range(5)))


def random_hahn(rng: random.Random, N: int | None = None, n_max: int = 10) -> HahnParams:
    return heunracah.random_hahn_params(rng, N if N is not None else rng.randint(2, n_max))


def random_rii(rng: random.Random, N: int, n_max: int) -> gevp.RIIParams:
    while True:
        den = rng.randint(2, 12)
        num = rng.randint(-12 * den, 12 * den)
        if num % den == 0:
            continue
        p = gevp.RIIParams(Fraction(num, den), small_rational(rng), N)
        if not p.problems(n_max):
            return p


def _result(name: str, failures: list, reference: str, total: int, **details) -> Check:
    status = "pass" if not failures else "fail"
    return Check(name, status, expected=f"{total} exact matches",
                 observed=f"{total - len(failures)} exact matches", reference=reference,
                 details={"failures": failures[:5], **details})


def suite_degree_raising(rng, samples=50, N=10) -> Check:
    failures = []
    for _ in range(samples):
        p = random_heun_params(rng)
        W = heunhahn.build_heun_hahn(p, N)
        ok, report = heunhahn.degree_raise_check(W, N, p)
        if not ok:
            failures.append({"params": p.to_json(),
                             "rows": [r for r in report["rows"] if not r["ok"]]})
    return _result("degree_raising", failures,
                   "W x^n = sigma1(n) x^(n+1) + lower terms, n < N", samples, N=N)


def suite_pochhammer_tridiag(rng, samples=50, N=10) -> Check:
    failures = []
    basis = PochhammerBasis(N)
    for _ in range(samples):
        p = random_heun_params(rng)
        W = heunhahn.build_heun_hahn(p, N)
        if not is_admissible(W, N):
            failures.append({"params": p.to_json(), "error": "not admissible"})
            continue
        try:
            tri = heunhahn.pochhammer_tridiag(W, basis, p)
        except heunhahn.TridiagonalityError as exc:
            failures.append({"params": p.to_json(), "error": str(exc)})
            continue
        if not tri.ok:
            failures.append({"params": p.to_json(), "mismatches": tri.matches})
    return _result("pochhammer_tridiagonality", failures,
                   "W phi_n = s1 phi_(n+1) + s2 phi_n + s3 phi_(n-1) with closed forms",
                   samples, N=N)


def suite_hahn_eigen(rng, samples=10, N_max=10) -> Check:
    failures = []
    for _ in range(samples):
        h = random_hahn(rng, n_max=N_max)
        Y = hahn.build_Y(h)
        for n in range(h.N + 1):
            P = hahn.hahn_poly(h, n)
            if Y.apply_poly(P) != P * hahn.eigenvalue(h, n) or P.lead != 1 or P.degree != n:
                failures.append({"hahn": h.to_json(), "n": n})
    return _result("hahn_eigenproblem", failures, "Y P_n = n(n+alpha+beta+1) P_n", samples)


def suite_bilinear(rng, samples=50, N_max=10) -> Check:
    failures = []
    for _ in range(samples):
        h = random_hahn(rng, n_max=N_max)
        t = random_taus(rng)
        _, _, checks = hahn.build_bilinear_W(t, h)
        if not all(checks.values()):
            failures.append({"hahn": h.to_json(), "taus": t.to_json(), "checks": checks})
    return _result("bilinear_coincidence", failures,
                   "tau1 XY + tau2 YX + tau3 X + tau4 Y + tau0 has the closed-form "
                   "coefficients and kappa = tau1 + tau2", samples)


def suite_hahn_tridiag(rng, samples=20, N_max=8) -> Check:
    failures = []
    for _ in range(samples):
        h = random_hahn(rng, n_max=N_max)
        t = random_taus(rng)
        W = hahn.compose_bilinear(t, hahn.build_X(), hahn.build_Y(h))
        try:
            ex = hahn.hahn_tridiag(W, h, t)
        except hahn.HahnBandError as exc:
            failures.append({"hahn": h.to_json(), "error": str(exc)})
            continue
        if not ex.ok:
            failures.append({"hahn": h.to_json(), "taus": t.to_json(),
                             "mismatches": ex.mismatches})
    return _result("hahn_basis_tridiagonality", failures,
                   "W P_n = xi_(n+1) P_(n+1) + eta_n P_n + zeta_n u_n P_(n-1)", samples)


def suite_hahn_algebra(rng, samples=10, N_max=10) -> Check:
    failures = []
    for _ in range(samples):
        h = random_hahn(rng, n_max=N_max)
        ok, report = hahn.verify_hahn_algebra(h)
        if not ok:
            failures.append({"hahn": h.to_json(), "report": report})
    return _result("hahn_algebra", failures,
                   "[Y,[X,Y]] and [[X,Y],X] with a=-2, b=2N+beta-alpha, ...", samples)


def suite_heun_racah(rng, samples=20, N_max=8) -> Check:
    failures = []
    for _ in range(samples):
        h = random_hahn(rng, n_max=N_max)
        t = random_taus(rng)
        W = hahn.compose_bilinear(t, hahn.build_X(), hahn.build_Y(h))
        sc = heunracah.fit_heun_racah(hahn.build_Y(h), W, strict=False)
        e1, e2 = heunracah.e_closed_forms(t, h)
        if not all(sc.solvable.values()) or sc["e1"] != e1 or sc["e2"] != e2:
            failures.append({"hahn": h.to_json(), "taus": t.to_json(),
                             "fitted": {"e1": format_rational(sc["e1"]),
                                        "e2": format_rational(sc["e2"])},
                             "closed": {"e1": format_rational(e1), "e2": format_rational(e2)},
                             "solvable": sc.solvable})
    return _result("heun_racah_fit", failures,
                   "cubic Y-W relations with e2 = 2(tau1+tau2)^2 and closed-form e1", samples)


def suite_degeneration_triple(rng, samples=10, N_max=8) -> Check:
    failures = []
    for _ in range(samples):
        h = random_hahn(rng, n_max=N_max)
        tau1 = small_rational(rng)
        sign = rng.choice((1, -1))
        t = Taus(small_rational(rng), tau1, -tau1, small_rational(rng), sign * -tau1)
        W = hahn.compose_bilinear(t, hahn.build_X(), hahn.build_Y(h))
        sc = heunracah.fit_heun_racah(hahn.build_Y(h), W, strict=False)
        if sc["e1"] != 0 or sc["e2"] != 0:
            failures.append({"taus": t.to_json(), "e1": format_rational(sc["e1"]),
                             "e2": format_rational(sc["e2"])})
        triple = heunracah.build_racah_triple(h, small_rational(rng), small_rational(rng))
        if not all(triple.checks.values()):
            failures.append({"hahn": h.to_json(), "triple": triple.checks})
        ok, report = heunracah.verify_racah_pairs(triple)
        if not ok:
            failures.append({"hahn": h.to_json(), "pairs": report})
    return _result("degeneration_and_equitable_triple", failures,
                   "e1 = e2 = 0 under the Racah conditions; Y + W1 + W2 = 0; pairwise "
                   "Racah relations", samples)


def suite_differential(rng, samples=10) -> Check:
    failures = []
    for i in range(samples):
        q1 = Poly((small_rational(rng), small_rational(rng)))
        t1 = Poly((small_rational(rng), small_rational(rng)))
        t = random_taus(rng)
        if t.tau1 + t.tau2 == 0:
            t = Taus(t.tau0, t.tau1, t.tau2 + 1, t.tau3, t.tau4)
        for tt in (t, Taus(t.tau0, t.tau1, -t.tau1, t.tau3, t.tau4)):
            _, info = heunracah.differential_realization(q1, t1, tt)
            if not info["ok"]:
                failures.append({"taus": tt.to_json(), "info": info})
    return _result("differential_realization", failures,
                   "order 2 with leading x(x-1)(2 tau1 x - tau1 - tau4) when tau2 = -tau1; "
                   "order 3 with leading -(tau1+tau2) x^2 (x-1)^2 otherwise", 2 * samples)


def suite_gevp(rng, samples=10, N=8, n_max=5) -> Check:
    failures = []
    for _ in range(samples):
        p = random_rii(rng, N, n_max)
        member = gevp.heun_membership(p)
        if not member["ok"]:
            failures.append({"rii": p.to_json(), "membership": member})
        for n in range(n_max + 1):
            c = gevp.verify_gevp(p, n)
            expected_poles = [p.alpha + k for k in range(n)]
            if not (c.ok and c.grid_ok and c.poles == expected_poles
                    and c.lam == n * (N - p.beta - n)):
                failures.append({"rii": p.to_json(), **c.to_json()})
    return _result("generalized_eigenvalue_problem", failures,
                   "(L1 - lambda_n L2) U_n = 0 with lambda_n = n(N-beta-n)", samples)


def suite_qes(rng, N=8, Ms=(1, 2), per_M=3) -> Check:
    failures = []
    total = 0
    for M in Ms:
        for _ in range(per_M):
            total += 1
            p = heunhahn.engineer_qes_params(N, M, rng)
            try:
                res = heunhahn.qes_truncate(p, N, M)
            except (heunhahn.TruncationError, ArithmeticError) as exc:
                failures.append({"M": M, "params": p.to_json(), "error": str(exc)})
                continue
            W = heunhahn.build_heun_hahn(p, N)
            from . import linalg
            independent = linalg.charpoly(res.matrix)
            good = (res.kernel and all(W.apply_poly(psi).is_zero() for psi in res.kernel)
                    and res.charpoly == independent and res.charpoly.coeff(0) == 0)
            if not good:
                failures.append({"M": M, "params": p.to_json(), **res.to_json()})
    return _result("qes_truncation", failures,
                   "sigma1(M) = 0 leaves degree <= M invariant; kernel solves W psi = 0", total)


def _plus_one(fn: Callable) -> Callable:
    def wrapped(*args, **kwargs):
        return fn(*args, **kwargs) + 1
    return wrapped


def _perturb_item(fn: Callable, index) -> Callable:
    def wrapped(*args, **kwargs):
        out = fn(*args, **kwargs)
        if isinstance(out, dict):
            out = dict(out)
            out[index] = out[index] + 1
            return out
        out = list(out)
        out[index] = out[index] + 1
        return tuple(out)
    return wrapped


def mutations() -> list[tuple[str, object, str, Callable]]:
    """(label, module, attribute, perturbed replacement) for every closed form."""
    out = []
    for name in ("sigma1", "sigma2", "sigma3"):
        out.append((f"heunhahn.{name}", heunhahn, name, _plus_one(getattr(heunhahn, name))))
    orig_sigma2 = heunhahn.sigma2

    def sigma2_factor(p, N, n):
        # the n(2n-1) factor replaced by n(2n-1) + 1
        return orig_sigma2(p, N, n) + (p.mu1 - p.kappa * (N - n + 1))

    out.append(("heunhahn.sigma2[n(2n-1) factor]", heunhahn, "sigma2", sigma2_factor))
    for name in ("eigenvalue", "xi_coeff", "eta_coeff", "zeta_coeff"):
        out.append((f"hahn.{name}", hahn, name, _plus_one(getattr(hahn, name))))
    for key in ("a", "b", "c1", "c2", "d1", "d2"):
        out.append((f"hahn.hahn_algebra_constants[{key}]", hahn, "hahn_algebra_constants",
                    _perturb_item(hahn.hahn_algebra_constants, key)))
    for field_name in ("kappa", "mu1", "mu0", "nu1", "nu0", "r1", "r0"):
        def tau_map(t, h, _f=field_name, _orig=hahn.tau_to_heun):
            p = _orig(t, h)
            v = p.as_vector()
            v[HeunParams.names().index(_f)] += 1
            return HeunParams.from_vector(v)
        out.append((f"hahn.tau_to_heun[{field_name}]", hahn, "tau_to_heun", tau_map))
    out.append(("hahn.bilinear_closed_form", hahn, "bilinear_closed_form",
                _plus_one(hahn.bilinear_closed_form)))
    for i, label in enumerate(("e1", "e2")):
        out.append((f"heunracah.e_closed_forms[{label}]", heunracah, "e_closed_forms",
                    _perturb_item(heunracah.e_closed_forms, i)))
    out.append(("heunracah.pi3_closed_form", heunracah, "pi3_closed_form",
                _plus_one(heunracah.pi3_closed_form)))
    for i, label in enumerate(("W1", "W2")):
        out.append((f"heunracah.racah_triple_explicit[{label}]", heunracah,
                    "racah_triple_explicit", _perturb_item(heunracah.racah_triple_explicit, i)))
    out.append(("gevp.lambda_n", gevp, "lambda_n", _plus_one(gevp.lambda_n)))
    out.append(("gevp.l2_heun_params", gevp, "l2_heun_params",
                lambda p: HeunParams(nu0=0, r0=-p.alpha)))
    return out


def quick_suites(seed: int) -> list[Check]:
    """Reduced-size run of every suite, used by the mutation check."""
    mk = lambda: random.Random(seed)
    return [
        suite_degree_raising(mk(), samples=3, N=6),
        suite_pochhammer_tridiag(mk(), samples=3, N=6),
        suite_hahn_eigen(mk(), samples=2, N_max=6),
        suite_bilinear(mk(), samples=3, N_max=6),
        suite_hahn_tridiag(mk(), samples=2, N_max=5),
        suite_hahn_algebra(mk(), samples=2, N_max=6),
        suite_heun_racah(mk(), samples=2, N_max=5),
        suite_degeneration_triple(mk(), samples=2, N_max=5),
        suite_differential(mk(), samples=2),
        suite_gevp(mk(), samples=2, N=6, n_max=3),
        suite_qes(mk(), N=6, per_M=1),
    ]


def suite_mutation(seed: int = 0, only: list[str] | None = None) -> Check:
    """Each perturbed closed form must make at least one suite fail."""
    baseline = [c for c in quick_suites(seed) if not c.passed]
    if baseline:
        return Check("mutation_sensitivity", "error", expected="clean baseline",
                     observed=[c.name for c in baseline], reference="guards against vacuous checks")
    survivors = []
    caught = {}
    for label, module, attr, replacement in mutations():
        if only is not None and label not in only:
            continue
        with mock.patch.object(module, attr, replacement):
            failing = [c.name for c in quick_suites(seed) if not c.passed]
        caught[label] = failing
        if not failing:
            survivors.append(label)
    status = "pass" if not survivors else "fail"
    return Check("mutation_sensitivity", status, expected="every mutation detected",
                 observed=f"{len(caught) - len(survivors)}/{len(caught)} detected",
                 reference="perturbing any closed form by +1 breaks some suite",
                 details={"survivors": survivors, "caught_by": caught})


CRITERIA: list[tuple[str, Callable[[random.Random], Check]]] = [
    ("1", suite_degree_raising),
    ("2", suite_pochhammer_tridiag),
    ("3", suite_hahn_eigen),
    ("4", suite_bilinear),
    ("5", suite_hahn_tridiag),
    ("6", suite_hahn_algebra),
    ("7", suite_heun_racah),
    ("8", suite_degeneration_triple),
    ("9", suite_differential),
    ("10", suite_gevp),
    ("11", suite_qes),
]


def run_criterion(fn: Callable[[random.Random], Check], seed: int) -> Check:
    try:
        return fn(random.Random(seed))
    except Exception as exc:  # captured in the report, never fatal
        return Check(getattr(fn, "__name__", "suite"), "error", observed=repr(exc),
                     details={"traceback": traceback.format_exc()})


def run_all(seed: int = 0, include_mutation: bool = True) -> list[Check]:
    checks = [run_criterion(fn, seed + i) for i, (_, fn) in enumerate(CRITERIA)]
    if include_mutation:
        try:
            checks.append(suite_mutation(seed))
        except Exception as exc:
            checks.append(Check("mutation_sensitivity", "error", observed=repr(exc)))
    return checks
