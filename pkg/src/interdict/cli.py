"""Command-line surface: solve, verify, oracle probing, batch benchmarking.

Every numeric field in a report is an exact fraction rendered as "p/q"
(or a plain integer string); no floats except the wall-time field, which
is excluded from determinism guarantees.  Exit codes: 0 success, 2
invalid instance, 3 method/instance mismatch, 4 enumeration guard
exceeded, 5 guarantee failure (verify only; must never occur).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from fractions import Fraction

from .guards import SizeGuardError
from .instance import (BIPARTITE_KINDS, Instance, ParseError, ValidationError,
                       parse_instance, serialize_instance)
from .oracles import make_oracle, solve_framework
from .ptas import solve_ptas
from .stable import solve_exact
from .verify import brute_force_opt, check_guarantee

Q = Fraction

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MISMATCH = 3
EXIT_GUARD = 4
EXIT_GUARANTEE = 5


class MethodMismatch(Exception):
    pass


def fmt(value) -> str:
    value = Q(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from exc


def _load(path: str) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_instance(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _digest(inst: Instance) -> str:
    return hashlib.sha256(serialize_instance(inst).encode()).hexdigest()[:16]


def _emit(doc, stream=None):
    print(json.dumps(doc, sort_keys=True, indent=2), file=stream or sys.stdout)


def _solve_report(inst, method, alpha, epsilon):
    start = time.perf_counter()
    report = {
        "instance": _digest(inst),
        "problem": inst.problem_kind,
        "method": method,
        "budget": fmt(inst.budget),
        "guarantee_checked": False,
    }
    if method == "framework":
        result, outcome = solve_framework(inst, alpha)
        report.update(alpha=fmt(alpha),
                      lambda_star=fmt(outcome.lambda_star if outcome else 0),
                      branch=result.branch)
    elif method == "ptas":
        if inst.problem_kind not in BIPARTITE_KINDS:
            raise MethodMismatch("ptas requires a bipartite instance")
        result, ptas_rep = solve_ptas(inst, epsilon)
        report.update(epsilon=fmt(epsilon),
                      effective_epsilon=fmt(ptas_rep.effective_epsilon),
                      branch=result.branch)
    elif method == "exact":
        if inst.problem_kind != "bipartite_stable":
            raise MethodMismatch("exact requires a unit-capacity bipartite instance")
        result = solve_exact(inst)
        report.update(branch=result.branch)
    elif method == "brute":
        brute = brute_force_opt(inst)
        result = None
        report.update(removal_set=list(brute.removal), value=fmt(brute.opt),
                      budget_used=fmt(inst.cost_of(brute.removal)),
                      lower_bound=fmt(brute.opt), branch="within_budget")
    else:
        raise MethodMismatch(f"unknown method {method!r}")
    if result is not None:
        report.update(removal_set=list(result.removal), value=fmt(result.value),
                      budget_used=fmt(result.budget_used),
                      lower_bound=fmt(result.lower_bound))
    report["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return report


def cmd_solve(args) -> int:
    inst = _load(args.input)
    report = _solve_report(inst, args.method, args.alpha, args.epsilon)
    _emit(report)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load(args.input)
    start = time.perf_counter()
    result, outcome = solve_framework(inst, args.alpha)
    brute = brute_force_opt(inst)
    ok, reason = check_guarantee(result, brute, args.alpha, inst.budget)
    report = {
        "instance": _digest(inst),
        "problem": inst.problem_kind,
        "method": "framework",
        "alpha": fmt(args.alpha),
        "budget": fmt(inst.budget),
        "removal_set": list(result.removal),
        "value": fmt(result.value),
        "budget_used": fmt(result.budget_used),
        "branch": result.branch,
        "lambda_star": fmt(outcome.lambda_star if outcome else 0),
        "lower_bound": fmt(result.lower_bound),
        "opt": fmt(brute.opt),
        "opt_removal_set": list(brute.removal),
        "guarantee_checked": True,
        "guarantee": "pass" if ok else "fail",
    }
    if reason:
        report["reason"] = reason
    report["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    _emit(report)
    return EXIT_OK if ok else EXIT_GUARANTEE


def cmd_oracle(args) -> int:
    inst = _load(args.input)
    oracle = make_oracle(inst)
    evals = []
    for lam in args.lam:
        if lam < 0:
            raise MethodMismatch("multiplier must be nonnegative")
        ev = oracle(lam)
        evals.append({
            "lambda": fmt(lam),
            "L": fmt(ev.L_value),
            "cost": fmt(ev.cost),
            "payment": fmt(ev.payment),
            "support": sorted(e for e, v in ev.r.items() if v >= 1),
        })
    _emit({"instance": _digest(inst), "problem": inst.problem_kind, "evals": evals})
    return EXIT_OK


def cmd_bench(args) -> int:
    import pathlib

    directory = pathlib.Path(args.dir)
    rows = []
    for path in sorted(directory.glob("*.json")):
        row = {"file": path.name, "method": "framework", "value": "", "opt": "",
               "ratio": "", "budget_ratio": "", "time_ms": "", "status": ""}
        start = time.perf_counter()
        try:
            inst = _load(str(path))
            result, _ = solve_framework(inst, args.alpha)
            brute = brute_force_opt(inst)
            ok, reason = check_guarantee(result, brute, args.alpha, inst.budget)
            row.update(value=fmt(result.value), opt=fmt(brute.opt),
                       budget_ratio=fmt(result.budget_used / inst.budget),
                       status="pass" if ok else f"fail: {reason}")
            if brute.opt > 0:
                row["ratio"] = fmt(result.value / brute.opt)
            else:
                row["ratio"] = "1" if result.value == 0 else "inf"
        except (ParseError, ValidationError, SizeGuardError, MethodMismatch) as exc:
            row["status"] = f"error: {exc}"
        row["time_ms"] = str(round((time.perf_counter() - start) * 1000, 3))
        rows.append(row)

    fields = ["file", "method", "value", "opt", "ratio", "budget_ratio",
              "time_ms", "status"]
    try:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            writer.writerows(rows)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interdict",
        description="Budget-constrained interdiction solvers with exact arithmetic")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance")
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--method", default="framework",
                         choices=["framework", "ptas", "exact", "brute"])
    p_solve.add_argument("--alpha", type=parse_fraction, default=Q(1))
    p_solve.add_argument("--epsilon", type=parse_fraction, default=Q(1))
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="framework vs brute force with guarantee check")
    p_verify.add_argument("--input", required=True)
    p_verify.add_argument("--alpha", type=parse_fraction, default=Q(1))
    p_verify.set_defaults(func=cmd_verify)

    p_oracle = sub.add_parser("oracle", help="probe the dual oracle at multipliers")
    p_oracle.add_argument("--input", required=True)
    p_oracle.add_argument("--lambda", dest="lam", type=parse_fraction,
                          action="append", required=True, metavar="P/Q")
    p_oracle.set_defaults(func=cmd_oracle)

    p_bench = sub.add_parser("bench", help="verify every instance in a directory to CSV")
    p_bench.add_argument("--dir", required=True)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--alpha", type=parse_fraction, default=Q(1))
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: invalid instance: {exc}", file=sys.stderr)
        code = EXIT_INVALID
    except MethodMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_MISMATCH
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_GUARD
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
