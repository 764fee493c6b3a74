"""Batch front end: verify, sweep, compare, identity, hadamard.

Exit codes: 0 all checks sound, 1 a violation (including a rejected
certificate), 2 configuration error, 3 oracle failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import List, Optional

import numpy as np

from . import bounds as bnd
from . import oracle
from .classes import (ClassCertificate, ClassKind, HModulus, TestFunction,
                      certify_membership)
from .errors import (ConjugateMissing, DomainError, NonFiniteSample,
                     NotIntegrable, ParamMismatch, ToleranceNotReached)
from .moments import RuleParams

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_ORACLE = 3

_SOUND_SLACK = 1e-9

SWEEP_COLUMNS = ["alpha", "lambda", "q", "s", "p",
                 "bound_kind", "branch", "lhs", "rhs", "ratio"]


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return "%.17g" % x


def parse_function(spec: str):
    """Parse an inline function spec into (f, f_prime).

    Supported forms:
      poly:c0,c1,...   f(x) = sum c_k x^k
      pow:beta,r       f(x) = beta * x^r          (r > 0, domain x >= 0)
      exp:k            f(x) = exp(k x)
    """
    try:
        name, _, rest = spec.partition(":")
        if name == "poly":
            coeffs = [float(c) for c in rest.split(",")]
            if not coeffs:
                raise ValueError
            dcoeffs = [k * c for k, c in enumerate(coeffs)][1:] or [0.0]

            def f(x, c=tuple(coeffs)):
                return sum(ck * x ** k for k, ck in enumerate(c))

            def fp(x, c=tuple(dcoeffs)):
                return sum(ck * x ** k for k, ck in enumerate(c))

            return f, fp
        if name == "pow":
            beta_s, r_s = rest.split(",")
            beta, r = float(beta_s), float(r_s)
            if r <= 0.0:
                raise ValueError
            return (lambda x: beta * x ** r,
                    lambda x: beta * r * x ** (r - 1.0))
        if name == "exp":
            k = float(rest)
            return (lambda x: np.exp(k * x), lambda x: k * np.exp(k * x))
    except (ValueError, TypeError):
        pass
    raise ConfigError(f"cannot parse function spec {spec!r}")


def parse_modulus(spec: str, s: Optional[float]) -> HModulus:
    if spec == "t":
        return HModulus.identity()
    if spec == "t^s":
        if s is None:
            raise ConfigError("--h t^s needs --s")
        return HModulus.power(s)
    if spec == "1":
        return HModulus.constant()
    if spec == "1/t":
        return HModulus.reciprocal()
    raise ConfigError(f"unknown modulus {spec!r}")


def _grid(values: Optional[List[float]], default: List[float]) -> List[float]:
    out = values if values is not None else default
    if not out:
        raise ConfigError("empty parameter grid")
    return out


def _s_values(args) -> List[Optional[float]]:
    grid = getattr(args, "s_grid", None)
    if grid:
        return list(grid)
    return [getattr(args, "s", None)]


def _build_tf(args, q: float, s: Optional[float]) -> TestFunction:
    f, fp = parse_function(args.function)
    h = parse_modulus(args.h, s)
    kind = ClassKind.H_CONCAVE if getattr(args, "concave", False) \
        else ClassKind.H_CONVEX
    cert = ClassCertificate(kind, h, q)
    a, b = args.interval
    if not a < b:
        raise ConfigError("interval needs A < B")
    try:
        return TestFunction(f, fp, a, b, cert)
    except DomainError as exc:
        raise ConfigError(str(exc))


def _rule_params(args, alpha: float, lam: float, q: float) -> RuleParams:
    p = getattr(args, "p", None)
    if p is None and q > 1.0 and args.bound in ("holder", "holder-concave"):
        return RuleParams.with_conjugate(alpha, lam, q)
    return RuleParams(alpha, lam, q, p)


def _evaluate_bound(tf: TestFunction, rp: RuleParams, args) -> bnd.BoundResult:
    if args.bound == "power-mean":
        return bnd.bound_power_mean(tf, rp)
    if args.bound == "holder":
        return bnd.bound_holder_hconvex(tf, rp)
    if args.bound == "holder-concave":
        return bnd.bound_holder_hconcave(tf, rp)
    raise ConfigError(f"unknown bound {args.bound!r}")


def _iter_rows(args):
    """Yield one evaluated row per grid point, in grid order."""
    alphas = _grid(args.alpha_grid, [0.5])
    lams = _grid(args.lambda_grid, [1.0 / 3.0])
    qs = _grid(args.q_grid, [1.0])
    for q, s in itertools.product(qs, _s_values(args)):
        tf = _build_tf(args, q, s)
        rep = certify_membership(tf, n_samples=args.samples, seed=args.seed)
        mean = oracle.mean_value(tf)
        for alpha, lam in itertools.product(alphas, lams):
            row = {
                "alpha": alpha, "lambda": lam, "q": q, "s": s,
                "p": getattr(args, "p", None),
                "bound_kind": args.bound,
            }
            if not rep.holds:
                row.update(branch="", lhs=None, rhs=None,
                           status="rejected", sound=False)
                yield row
                continue
            rp = _rule_params(args, alpha, lam, q)
            lhs = abs(oracle.rule_value(tf, alpha, lam) - mean)
            res = _evaluate_bound(tf, rp, args)
            sound = lhs <= res.value + _SOUND_SLACK * (1.0 + res.value)
            row.update(branch=res.branch.value, lhs=lhs, rhs=res.value,
                       status="ok", sound=sound)
            yield row


def _write_table(rows, columns, fmt, out_path):
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(row.get(c)) for c in columns))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            [{c: row.get(c) for c in columns} for row in rows],
            indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    columns = ["alpha", "lambda", "q", "s", "branch",
               "lhs", "rhs", "margin", "sound"]
    rows = []
    first_bad = None
    for row in _iter_rows(args):
        if row["status"] == "ok":
            row["margin"] = row["rhs"] - row["lhs"]
        else:
            row["margin"] = None
            row["branch"] = "rejected"
        rows.append(row)
        if not row["sound"] and first_bad is None:
            first_bad = row
    _write_table(rows, columns, args.format, args.out)
    if first_bad is not None:
        print("first violation:",
              {c: first_bad.get(c) for c in columns}, file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = []
    all_sound = True
    for row in _iter_rows(args):
        if row["status"] != "ok":
            all_sound = False
            row["ratio"] = None
        else:
            row["ratio"] = row["lhs"] / row["rhs"] if row["rhs"] > 0.0 \
                else (0.0 if row["lhs"] == 0.0 else float("inf"))
            all_sound = all_sound and row["sound"]
        rows.append(row)
    _write_table(rows, SWEEP_COLUMNS, args.format, args.out)
    return EXIT_OK if all_sound else EXIT_VIOLATION


_PRIOR_KINDS = {
    "general-convex": bnd.BoundKind.PRIOR_GENERAL_CONVEX,
    "midpoint-power-mean": bnd.BoundKind.PRIOR_MIDPOINT_POWER_MEAN,
    "midpoint-holder": bnd.BoundKind.PRIOR_MIDPOINT_HOLDER,
    "simpson-holder": bnd.BoundKind.PRIOR_SIMPSON_HOLDER,
    "trapezoid-holder": bnd.BoundKind.PRIOR_TRAPEZOID_HOLDER,
    "classical-simpson": bnd.BoundKind.CLASSICAL_SIMPSON,
}


def cmd_compare(args) -> int:
    kind_names = args.kinds.split(",")
    rows = []
    alphas = _grid(args.alpha_grid, [0.5])
    lams = _grid(args.lambda_grid, [1.0 / 3.0])
    qs = _grid(args.q_grid, [2.0])
    for q, s in itertools.product(qs, _s_values(args)):
        tf = _build_tf(args, q, s)
        for alpha, lam in itertools.product(alphas, lams):
            p = getattr(args, "p", None)
            if p is None and q > 1.0:
                rp = RuleParams.with_conjugate(alpha, lam, q)
            else:
                rp = RuleParams(alpha, lam, q, p)
            row = {"alpha": alpha, "lambda": lam, "q": q, "s": s, "p": rp.p}
            best_name, best_val = None, None
            for name in kind_names:
                if name in _PRIOR_KINDS:
                    res = bnd.bound_prior(tf, rp, _PRIOR_KINDS[name],
                                          s=s, sup_f4=args.sup_f4)
                else:
                    res = _evaluate_bound(
                        tf, rp, argparse.Namespace(bound=name))
                row[name] = res.value
                if best_val is None or res.value < best_val:
                    best_name, best_val = name, res.value
            row["argmin"] = best_name
            rows.append(row)
    columns = ["alpha", "lambda", "q", "s", "p"] + kind_names + ["argmin"]
    _write_table(rows, columns, args.format, args.out)
    return EXIT_OK


def _identity_corpus(seed: int, n_cases: int):
    rng = np.random.default_rng(seed)
    cases = []
    q = 1.0
    cert = ClassCertificate(ClassKind.H_CONVEX, HModulus.identity(), q)
    while len(cases) < n_cases:
        family = len(cases) % 3
        alpha = float(rng.uniform(0.0, 1.0))
        lam = float(rng.uniform(0.0, 1.0))
        if family == 0:
            coeffs = rng.uniform(-3.0, 3.0, 5)
            a = float(rng.uniform(-2.0, 0.0))
            b = a + float(rng.uniform(0.5, 3.0))
            f, fp = parse_function("poly:" + ",".join(map(str, coeffs)))
        elif family == 1:
            k = float(rng.uniform(-2.0, 2.0))
            a = float(rng.uniform(-1.0, 0.5))
            b = a + float(rng.uniform(0.5, 2.0))
            f, fp = parse_function(f"exp:{k}")
        else:
            beta = float(rng.uniform(0.2, 3.0))
            r = float(rng.uniform(1.2, 3.0))
            a = float(rng.uniform(0.0, 1.0))
            b = a + float(rng.uniform(0.5, 2.0))
            f, fp = parse_function(f"pow:{beta},{r}")
        tf = TestFunction(f, fp, a, b, cert, skip_derivative_check=True)
        cases.append((tf, RuleParams(alpha, lam, q)))
    return cases


def cmd_identity(args) -> int:
    worst = 0.0
    for tf, rp in _identity_corpus(args.seed, args.cases):
        worst = max(worst, oracle.lemma_identity_residual(tf, rp))
    print(f"max identity residual over {args.cases} cases: {worst:.3e}")
    return EXIT_OK if worst <= 1e-9 else EXIT_VIOLATION


def cmd_hadamard(args) -> int:
    tf = _build_tf(args, q=1.0, s=getattr(args, "s", None))
    variant = oracle.HadamardVariant(args.variant)
    res = oracle.hadamard_check(tf, variant)
    print(f"left={_fmt(res.left)} middle={_fmt(res.middle)} "
          f"right={_fmt(res.right)} holds={res.holds}")
    return EXIT_OK if res.holds else EXIT_VIOLATION


def _add_common(p):
    p.add_argument("--function", required=True,
                   help="poly:c0,c1,... | pow:beta,r | exp:k")
    p.add_argument("--interval", nargs=2, type=float, metavar=("A", "B"),
                   default=[0.0, 1.0])
    p.add_argument("--h", default="t", help="modulus: t | t^s | 1 | 1/t")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--s-grid", type=float, nargs="*", default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--alpha-grid", type=float, nargs="*", default=None)
    p.add_argument("--lambda-grid", type=float, nargs="*", default=None)
    p.add_argument("--q-grid", type=float, nargs="*", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=2000,
                   help="membership-check sample count")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--bound", default="power-mean",
                   choices=["power-mean", "holder", "holder-concave"])
    p.add_argument("--concave", action="store_true",
                   help="declare an h-concave certificate")
    p.add_argument("--sup-f4", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadcert",
        description="Certified error bounds for blended quadrature rules")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in [("verify", cmd_verify), ("sweep", cmd_sweep),
                     ("compare", cmd_compare), ("hadamard", cmd_hadamard)]:
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(func=fn)
    pc = sub.choices["compare"]
    pc.add_argument("--kinds", required=True,
                    help="comma list: power-mean,holder,holder-concave,"
                         + ",".join(_PRIOR_KINDS))
    ph = sub.choices["hadamard"]
    ph.add_argument("--variant", default="classical",
                    choices=[v.value for v in oracle.HadamardVariant])
    pi = sub.add_parser("identity")
    pi.add_argument("--cases", type=int, default=200)
    pi.add_argument("--seed", type=int, default=0)
    pi.set_defaults(func=cmd_identity)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, ParamMismatch, ConjugateMissing,
            NotIntegrable) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ToleranceNotReached, NonFiniteSample) as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
