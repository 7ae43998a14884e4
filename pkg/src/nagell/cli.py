"""Command line front end: pell, gpell, solve, tables, verify.

Exit codes: 0 success, 1 a verified counterexample, 2 bad usage.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import harness
from .formsolver import FormInstance, parse_sign, solve_all
from .gpell import class_reps, is_solution, solve_gpell
from .pell import pell_fundamental, pell_solutions

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _sign_arg(text: str) -> int:
    try:
        return parse_sign(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _sign_str(sign: int) -> str:
    return "+" if sign > 0 else "-"


def _pairs_json(pairs) -> list[list[str]]:
    return [[str(a), str(b)] for a, b in pairs]


def _stringify(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {key: _stringify(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(val) for val in obj]
    return obj


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_pell(args) -> tuple[str, int]:
    try:
        fund = pell_fundamental(args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sols = pell_solutions(fund, args.count)
    for x, y in sols:
        assert x * x - args.d * y * y == 1
    if args.format == "json":
        out = {"d": args.d, "fundamental": [str(fund.x1), str(fund.y1)], "solutions": _pairs_json(sols)}
        return _dump(out), EXIT_OK
    if args.format == "csv":
        lines = ["j,x,y"] + [f"{j},{x},{y}" for j, (x, y) in enumerate(sols, 1)]
        return "\n".join(lines) + "\n", EXIT_OK
    lines = [f"x^2 - {args.d}y^2 = 1", f"fundamental: ({fund.x1}, {fund.y1})", "solutions:"]
    lines += [f"  ({x}, {y})" for x, y in sols]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_gpell(args) -> tuple[str, int]:
    try:
        cs = class_reps(args.d, args.N)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sols = solve_gpell(args.d, args.N, args.v_limit)
    for s in sols:
        assert is_solution(s, args.d, args.N)
    reps = [(r.u, r.v) for r in cs.reps]
    if args.format == "json":
        out = {
            "d": args.d,
            "N": args.N,
            "v_limit": args.v_limit,
            "unit": [str(cs.unit.x1), str(cs.unit.y1)],
            "reps": [{"u": str(r.u), "v": str(r.v), "ambiguous": r.ambiguous} for r in cs.reps],
            "solutions": _pairs_json(sols),
        }
        return _dump(out), EXIT_OK
    if args.format == "csv":
        lines = ["u,v"] + [f"{u},{v}" for u, v in sols]
        return "\n".join(lines) + "\n", EXIT_OK
    lines = [f"u^2 - {args.d}v^2 = {args.N}"]
    if not reps:
        lines.append("no solutions")
        return "\n".join(lines) + "\n", EXIT_OK
    lines.append(f"unit: ({cs.unit.x1}, {cs.unit.y1})")
    lines.append("reps: " + ", ".join(f"({u}, {v})" for u, v in reps))
    lines.append(f"solutions with v <= {args.v_limit}:")
    lines += [f"  ({u}, {v})" for u, v in sols]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_solve(args) -> tuple[str, int]:
    if args.k < 0:
        raise UsageError(f"k must be >= 0, got {args.k}")
    inst = FormInstance(args.k, args.n, args.sign)
    out = solve_all(inst, args.bound)
    for s in out.solutions:
        assert inst.holds(s.x, s.y)
    if args.format == "json":
        body = {
            "k": args.k,
            "n": args.n,
            "sign": _sign_str(inst.sign),
            "bound": args.bound,
            "status": out.status,
            "solutions": _pairs_json(out.pairs()),
            "generators": _stringify(out.generators),
        }
        return _dump(body), EXIT_OK
    if args.format == "csv":
        lines = ["x,y,parity"] + [f"{s.x},{s.y},{s.parity}" for s in out.solutions]
        return "\n".join(lines) + "\n", EXIT_OK
    rhs = f"{'' if inst.sign > 0 else '-'}2^{args.n}"
    lines = [f"x^2 - {args.k}xy + y^2 = {rhs}", f"status: {out.status}"]
    if out.solutions:
        lines.append(f"solutions with max(x, y) <= {args.bound}:")
        lines += [f"  ({s.x}, {s.y})" for s in out.solutions]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_tables(args) -> tuple[str, int]:
    table = harness.build_tables(args.n_max, args.sign, args.k_margin)
    if args.format == "csv":
        return table.to_csv(), EXIT_OK
    if args.format == "json":
        return _dump(table.to_json()), EXIT_OK
    lines = [f"sign {_sign_str(table.sign)}"]
    for n, solvable, odd in table.rows:
        lines.append(f"n={n}: solvable {solvable}; odd-solution {odd}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    try:
        checks = harness.run_checks(args.theorem, args.n_max, args.k_margin, args.p_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    code = EXIT_COUNTEREXAMPLE if any(c.failed for c in checks) else EXIT_OK
    if args.format == "json":
        return harness.dumps_report(checks), code
    if args.format == "csv":
        return harness.checks_to_csv(checks), code
    lines = []
    for c in checks:
        lines.append(f"{c.theorem_id}: {c.verdict} ({len(c.witnesses)} witnesses, {len(c.counterexamples)} counterexamples)")
        for w in c.counterexamples:
            p = f" p={w.p}" if w.p is not None else ""
            lines.append(f"  n={w.n} k={w.k}{p} ({w.x}, {w.y}) {w.reason}")
    return "\n".join(lines) + "\n", code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nagell", description="Solve x^2 - kxy + y^2 = +-2^n and check the bounds on k.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p, default="text"):
        p.add_argument("--format", choices=("text", "json", "csv"), default=default)
        p.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")

    p = sub.add_parser("pell", help="fundamental solution of x^2 - dy^2 = 1")
    p.add_argument("d", type=int)
    p.add_argument("--count", type=_positive, default=1)
    add_format(p)
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("gpell", help="all solutions of u^2 - dv^2 = N")
    p.add_argument("d", type=int)
    p.add_argument("N", type=int)
    p.add_argument("--v-limit", type=_nonneg, default=100)
    add_format(p)
    p.set_defaults(func=cmd_gpell)

    p = sub.add_parser("solve", help="positive solutions of x^2 - kxy + y^2 = sign*2^n")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--sign", type=_sign_arg, default=1)
    p.add_argument("--bound", type=_nonneg, default=1000)
    add_format(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("tables", help="solvable k for n = 0..n_max")
    p.add_argument("--n-max", type=_nonneg, required=True)
    p.add_argument("--sign", type=_sign_arg, default=1)
    p.add_argument("--k-margin", type=_nonneg, default=harness.DEFAULT_K_MARGIN)
    add_format(p, default="csv")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="check the bounds on k over a grid")
    p.add_argument("--theorem", choices=harness.THEOREMS + ("all",), default="all")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--k-margin", type=_nonneg, default=harness.DEFAULT_K_MARGIN)
    p.add_argument("--p-max", type=_nonneg, default=100)
    add_format(p, default="json")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except (UsageError, ValueError) as exc:
        # every ValueError raised by the library is an input check
        print(f"nagell {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
