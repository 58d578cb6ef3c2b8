"""Command-line interface.

    hahnheun heun {construct|verify-degree|tridiag-pochhammer|qes}
    hahnheun hahn {poly|verify-eigen|algebra|bilinear|tridiag}
    hahnheun algebra {fit-yw|fit-xw|degenerate|triple|diffreal}
    hahnheun gevp verify
    hahnheun verify-all

Every command prints a JSON report (``--format json``, the default) or a
short text summary, and exits nonzero when any check fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import gevp, hahn, heunhahn, heunracah, suites
from .exactnum import format_rational, parse_rational
from .hahn import HahnParams, Taus
from .heunhahn import HeunParams, PochhammerBasis
from .polyops import Poly
from .shiftalg import BoundaryError, is_admissible

COMMANDS = {
    "heun": ("construct", "verify-degree", "tridiag-pochhammer", "qes"),
    "hahn": ("poly", "verify-eigen", "algebra", "bilinear", "tridiag"),
    "algebra": ("fit-yw", "fit-xw", "degenerate", "triple", "diffreal"),
    "gevp": ("verify",),
    "verify-all": (),
}

RATIONAL_KEYS = ("alpha", "beta", "tau0", "tau1", "tau2", "tau3", "tau4", "gamma", "epsilon",
                 "kappa", "mu1", "mu0", "nu1", "nu0", "r1", "r0")
INT_KEYS = ("N", "n", "M", "seed", "n_max")
LIST_KEYS = ("q1", "t1")
FLAG_KEYS = ("engineer",)
PARAM_KEYS = RATIONAL_KEYS + INT_KEYS + LIST_KEYS + FLAG_KEYS
OTHER_KEYS = ("format", "output")

DEFAULTS: dict[str, Any] = {
    "alpha": Fraction(1, 3),
    "beta": Fraction(1, 5),
    "N": 8,
    "seed": 0,
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    action: str | None
    parameters: dict[str, Any] = field(default_factory=dict)
    output: str | None = None
    format: str = "json"

    def get(self, key: str, default: Any = None) -> Any:
        if key in self.parameters:
            return self.parameters[key]
        return DEFAULTS.get(key, default)

    def echo(self) -> dict:
        """Parameters as exact strings; verify-all also echoes the defaults it uses."""
        out = {}
        params = dict(self.parameters)
        if self.command == "verify-all":
            params = {**DEFAULTS, **params}
        for k, v in params.items():
            if isinstance(v, Fraction):
                out[k] = format_rational(v)
            elif isinstance(v, list):
                out[k] = [format_rational(c) for c in v]
            else:
                out[k] = v
        return out


def _convert(key: str, raw: Any) -> Any:
    text = str(raw).strip()
    try:
        if key in RATIONAL_KEYS:
            return parse_rational(text)
        if key in INT_KEYS:
            return int(text)
        if key in LIST_KEYS:
            return [parse_rational(c) for c in text.split(",") if c.strip()]
        if key in FLAG_KEYS:
            if isinstance(raw, bool):
                return raw
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"expected a boolean, got {text!r}")
    except ValueError as exc:
        raise UsageError(f"--{key.replace('_', '-')}: {exc}") from None
    return text


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; blank lines and ``#`` comments ignored."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in PARAM_KEYS + OTHER_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_common(p: argparse.ArgumentParser) -> None:
    for key in RATIONAL_KEYS:
        p.add_argument(f"--{key}", default=None, metavar="P/Q")
    p.add_argument("--N", default=None, metavar="INT")
    p.add_argument("--n", default=None, metavar="INT")
    p.add_argument("--M", default=None, metavar="INT")
    p.add_argument("--n-max", dest="n_max", default=None, metavar="INT")
    p.add_argument("--seed", default=None, metavar="INT")
    p.add_argument("--q1", default=None, metavar="C0,C1", help="linear polynomial, low degree first")
    p.add_argument("--t1", default=None, metavar="C0,C1", help="linear polynomial, low degree first")
    p.add_argument("--engineer", action="store_const", const=True, default=None,
                   help="qes: sample parameters satisfying the truncation condition")
    p.add_argument("--format", choices=("json", "text"), default=None)
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--config", default=None, help="flat key=value file with the same keys")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hahnheun", description="Exact verification of the Heun-Hahn operator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for command, actions in COMMANDS.items():
        cp = sub.add_parser(command)
        if actions:
            asub = cp.add_subparsers(dest="action", required=True, parser_class=_Parser)
            for action in actions:
                _add_common(asub.add_parser(action))
        else:
            _add_common(cp)
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    raw: dict[str, Any] = {}
    if ns.config:
        raw.update(read_config_file(ns.config))
    for key in PARAM_KEYS + OTHER_KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            raw[key] = value
    params = {k: _convert(k, v) for k, v in raw.items() if k in PARAM_KEYS}
    cfg = RunConfig(ns.command, getattr(ns, "action", None), params,
                    output=raw.get("output"), format=raw.get("format", "json"))
    if cfg.format not in ("json", "text"):
        raise UsageError(f"unknown format {cfg.format!r}")
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    N = cfg.get("N")
    if N < 1:
        raise UsageError(f"--N must be a positive integer, got {N}")
    n = cfg.parameters.get("n")
    if n is not None and not 0 <= n <= N:
        raise UsageError(f"--n must lie in 0..{N}, got {n}")
    M = cfg.parameters.get("M")
    if M is not None and not 0 < M < N:
        raise UsageError(f"--M must satisfy 0 < M < N={N}, got {M}")
    n_max = cfg.parameters.get("n_max")
    if n_max is not None and not 0 <= n_max <= N:
        raise UsageError(f"--n-max must lie in 0..{N}, got {n_max}")
    for key in LIST_KEYS:
        if key in cfg.parameters and len(cfg.parameters[key]) > 2:
            raise UsageError(f"--{key} must have at most two coefficients")


# report assembly

def make_report(cfg: RunConfig, checks: list[suites.Check], result: Any = None) -> dict:
    counts = {s: sum(c.status == s for c in checks) for s in ("pass", "fail", "error")}
    return {
        "schema": suites.SCHEMA_VERSION,
        "command": " ".join(filter(None, (cfg.command, cfg.action))),
        "parameters": cfg.echo(),
        "checks": [c.to_json() for c in checks],
        "summary": {"total": len(checks), "passed": counts["pass"],
                    "failed": counts["fail"], "errors": counts["error"]},
        "result": result,
    }


def _check(name: str, ok: bool, reference: str, expected=None, observed=None, **details) -> suites.Check:
    return suites.Check(name, "pass" if ok else "fail", expected, observed, reference, details)


def _hahn(cfg: RunConfig) -> HahnParams:
    h = HahnParams(cfg.get("alpha"), cfg.get("beta"), cfg.get("N"))
    h.validate()
    return h


def _taus(cfg: RunConfig) -> Taus:
    rng = random.Random(cfg.get("seed"))
    sampled = suites.random_taus(rng)
    return Taus(*(cfg.parameters.get(f"tau{i}", getattr(sampled, f"tau{i}")) for i in range(5)))


def _heun(cfg: RunConfig) -> HeunParams:
    return HeunParams(**{k: cfg.parameters.get(k, Fraction(0)) for k in HeunParams.names()})


def cmd_heun(cfg: RunConfig) -> tuple[list, Any]:
    N = cfg.get("N")
    if cfg.action == "qes":
        M = cfg.get("M", 1)
        p = (heunhahn.engineer_qes_params(N, M, random.Random(cfg.get("seed")))
             if cfg.get("engineer") else _heun(cfg))
        try:
            res = heunhahn.qes_truncate(p, N, M)
        except heunhahn.TruncationError as exc:
            return [suites.Check("qes_truncation", "error", observed=str(exc),
                                 reference="sigma1(M) = 0")], {"params": p.to_json()}
        ok = all(heunhahn.build_heun_hahn(p, N).apply_poly(k).is_zero() for k in res.kernel)
        return ([_check("kernel_solves_W_psi_0", ok, "W psi = 0 for every kernel element",
                        observed=len(res.kernel))],
                {"params": p.to_json(), **res.to_json()})
    p = _heun(cfg)
    W = heunhahn.build_heun_hahn(p, N)
    if cfg.action == "construct":
        adm = is_admissible(W, N)
        return ([_check("boundary_admissible", adm, "A1(N) = 0 and A2(0) = 0")],
                {"params": p.to_json(), "operator": W.to_json()})
    if cfg.action == "verify-degree":
        ok, report = heunhahn.degree_raise_check(W, N, p)
        return [_check("degree_raising", ok, "deg W x^n = n+1, leading sigma1(n)")], report
    if cfg.action == "tridiag-pochhammer":
        try:
            tri = heunhahn.pochhammer_tridiag(W, PochhammerBasis(N), p)
        except heunhahn.TridiagonalityError as exc:
            return [suites.Check("pochhammer_tridiagonality", "fail", observed=str(exc))], None
        return ([_check("pochhammer_tridiagonality", tri.ok, "three-band expansion in phi_n")],
                tri.to_json())
    raise UsageError(f"unknown action {cfg.action}")


def cmd_hahn(cfg: RunConfig) -> tuple[list, Any]:
    h = _hahn(cfg)
    if cfg.action == "poly":
        n = cfg.get("n", 1)
        P = hahn.hahn_poly(h, n)
        return ([_check("monic", P.lead == 1 and P.degree == n, "P_n = x^n + ...")],
                {"n": n, "poly": P.to_json()})
    if cfg.action == "verify-eigen":
        Y = hahn.build_Y(h)
        checks = []
        for n in range(h.N + 1):
            P = hahn.hahn_poly(h, n)
            lam = hahn.eigenvalue(h, n)
            checks.append(_check(f"eigen_n={n}", Y.apply_poly(P) == P * lam,
                                 "Y P_n = n(n+alpha+beta+1) P_n", expected=format_rational(lam)))
        return checks, None
    if cfg.action == "algebra":
        ok, report = hahn.verify_hahn_algebra(h)
        return [_check("hahn_algebra", ok, "Hahn algebra relations")], report
    t = _taus(cfg)
    if cfg.action == "bilinear":
        W, p, checks = hahn.build_bilinear_W(t, h)
        return ([_check(k, v, "bilinear Heun operator") for k, v in checks.items()],
                {"taus": t.to_json(), "heun_params": p.to_json(), "operator": W.to_json()})
    if cfg.action == "tridiag":
        W = hahn.compose_bilinear(t, hahn.build_X(), hahn.build_Y(h))
        ex = hahn.hahn_tridiag(W, h, t)
        return ([_check("hahn_basis_tridiagonality", ex.ok, "three-band expansion in P_n")],
                {"taus": t.to_json(), **ex.to_json()})
    raise UsageError(f"unknown action {cfg.action}")


def cmd_algebra(cfg: RunConfig) -> tuple[list, Any]:
    t = _taus(cfg)
    if cfg.action == "degenerate":
        report = heunracah.degeneration_check(t, seed=cfg.get("seed"))
        return ([_check("iff_consistent", report["iff_consistent"],
                        "e1 = e2 = 0 exactly under the Racah conditions")],
                {"taus": t.to_json(), **report})
    if cfg.action == "diffreal":
        q1 = Poly(cfg.get("q1", [Fraction(0), Fraction(1)]))
        t1 = Poly(cfg.get("t1", [Fraction(1), Fraction(-2)]))
        W, info = heunracah.differential_realization(q1, t1, t)
        return ([_check("differential_realization", info["ok"], info["kind"])],
                {"taus": t.to_json(), "operator": W.to_json(), **info})
    h = _hahn(cfg)
    if cfg.action == "triple":
        rng = random.Random(cfg.get("seed"))
        gamma = cfg.get("gamma", suites.small_rational(rng))
        epsilon = cfg.get("epsilon", suites.small_rational(rng))
        triple = heunracah.build_racah_triple(h, gamma, epsilon)
        ok, pairs = heunracah.verify_racah_pairs(triple)
        checks = [_check(k, v, "equitable triple Y + W1 + W2 = 0") for k, v in triple.checks.items()]
        checks.append(_check("racah_pairs", ok, "pairwise Racah relations"))
        return checks, {"gamma": format_rational(gamma), "epsilon": format_rational(epsilon),
                        "W1": triple.W1.to_json(), "W2": triple.W2.to_json(), "pairs": pairs}
    W = hahn.compose_bilinear(t, hahn.build_X(), hahn.build_Y(h))
    if cfg.action == "fit-yw":
        sc = heunracah.fit_heun_racah(hahn.build_Y(h), W, strict=False)
        e1, e2 = heunracah.e_closed_forms(t, h)
        checks = [_check(k, v, "zero residual") for k, v in sc.solvable.items()]
        checks.append(_check("e1", sc["e1"] == e1, "closed form e1",
                             format_rational(e1), format_rational(sc["e1"])))
        checks.append(_check("e2", sc["e2"] == e2, "e2 = 2(tau1+tau2)^2",
                             format_rational(e2), format_rational(sc["e2"])))
        return checks, {"taus": t.to_json(), **sc.to_json()}
    if cfg.action == "fit-xw":
        sc = heunracah.fit_xw_relations(hahn.build_X(), W, strict=False)
        return ([_check(k, v, "zero residual") for k, v in sc.solvable.items()],
                {"taus": t.to_json(), **sc.to_json()})
    raise UsageError(f"unknown action {cfg.action}")


def cmd_gevp(cfg: RunConfig) -> tuple[list, Any]:
    p = gevp.RIIParams(cfg.get("alpha"), cfg.get("beta"), cfg.get("N"))
    n_max = cfg.get("n_max", min(p.N, 5))
    member = gevp.heun_membership(p)
    checks = [_check("heun_membership", member["ok"], "L1, L2 are Heun-Hahn operators")]
    rows = []
    for n in range(n_max + 1):
        c = gevp.verify_gevp(p, n)
        rows.append(c.to_json())
        checks.append(_check(f"gevp_n={n}", c.ok and c.grid_ok,
                             "(L1 - lambda_n L2) U_n = 0", expected="0",
                             observed="0" if c.ok else "nonzero"))
    return checks, {"membership": member, "per_n": rows}


def cmd_verify_all(cfg: RunConfig) -> tuple[list, Any]:
    seed = cfg.get("seed")
    checks = suites.run_all(seed)
    # the supplied (or default) parameters get their own direct checks
    sub = RunConfig(cfg.command, None, dict(cfg.parameters))
    for command, action in (("hahn", "verify-eigen"), ("hahn", "algebra"), ("hahn", "tridiag"),
                            ("algebra", "fit-yw"), ("algebra", "triple"), ("gevp", "verify")):
        sub.command, sub.action = command, action
        try:
            extra, _ = DISPATCH[command](sub)
        except Exception as exc:
            extra = [suites.Check(f"{command} {action}", "error", observed=repr(exc))]
        for c in extra:
            c.name = f"given:{command} {action}:{c.name}"
        checks.extend(extra)
    params = {"alpha": format_rational(cfg.get("alpha")), "beta": format_rational(cfg.get("beta")),
              "N": cfg.get("N"), "seed": seed, "taus": _taus(cfg).to_json()}
    return checks, {"effective_parameters": params}


DISPATCH: dict[str, Callable[[RunConfig], tuple[list, Any]]] = {
    "heun": cmd_heun,
    "hahn": cmd_hahn,
    "algebra": cmd_algebra,
    "gevp": cmd_gevp,
    "verify-all": cmd_verify_all,
}


def run(cfg: RunConfig) -> dict:
    try:
        checks, result = DISPATCH[cfg.command](cfg)
    except (ValueError, ArithmeticError) as exc:
        checks, result = [suites.Check(cfg.command, "error", observed=str(exc))], None
    return make_report(cfg, checks, result)


def render_text(report: dict) -> str:
    lines = [f"{report['command']}  {json.dumps(report['parameters'])}"]
    for c in report["checks"]:
        lines.append(f"  [{c['status'].upper():5}] {c['name']}"
                     + (f"  ({c['observed']})" if c["observed"] not in (None, "") else ""))
    s = report["summary"]
    lines.append(f"{s['passed']}/{s['total']} passed, {s['failed']} failed, {s['errors']} errors")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    report = run(cfg)
    text = json.dumps(report, indent=2) if cfg.format == "json" else render_text(report)
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    else:
        print(text)
    s = report["summary"]
    return 0 if s["failed"] == 0 and s["errors"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
