"""Command-line interface: ``pencil <command> [options] [POLY]``.

The polynomial is read from the positional argument, or from standard input
when it is omitted or given as ``-``.  Exit codes: 0 success, 1 a failed
check in ``verify``, 2 malformed input, 3 unmet preconditions, 4 numeric
failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import mpmath

from . import config, export
from .eggers import child_count_mismatches, conjugate_F_relation_check, sibling_conjugacy_check
from .infinity import branches_at_infinity, critical_values_at_infinity
from .kuolu import q_monotonicity_violations, verify_derivative_lemma
from .parser import PolySyntaxError, parse_poly
from .pencil import (
    NoWitnessError,
    pencil_analysis,
    bound_check,
    certificate_crosscheck,
    special_values,
    special_values_all_M,
)
from .puiseux import PreconditionError, newton_puiseux
from .series import render_series
from .uni import render

EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NUMERIC = 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _real_text(x, digits):
    text = mpmath.nstr(x, digits)
    return text[:-2] if text.endswith(".0") else text


def _num(v, digits=15):
    v = mpmath.mpc(v)
    if v.imag == 0:
        return _real_text(v.real, digits)
    sign = "-" if v.imag < 0 else "+"
    return f"{_real_text(v.real, digits)}{sign}{_real_text(abs(v.imag), digits)}j"


def _rat(q):
    return export.rational_json(q)


def _values_text(values):
    return "{" + ", ".join(_num(v) for v in values) + "}"


# -- commands ----------------------------------------------------------------


def cmd_puiseux(f, args, out):
    roots = newton_puiseux(f, max_order=config.current().max_order)
    if args.format == "json":
        return export.dumps({"roots": [export.series_json(r) for r in roots]})
    lines = []
    for i, r in enumerate(roots):
        lines.append(f"alpha{i}  cycle={r.cycle}  mult={r.mult}  x = {render_series(r)}")
    return "\n".join(lines)


def _germ(f, args):
    l = parse_poly(args.l) if getattr(args, "l", None) else None
    M = getattr(args, "M", None)
    return pencil_analysis(f, l, M, config.current().max_order)


def cmd_tree(f, args, out):
    an = _germ(f, args)
    if args.format == "json":
        return export.dumps(export.tree_json(an.tree))
    if args.format == "dot":
        return export.tree_dot(an.tree).rstrip("\n")
    lines = []
    for b in an.tree.nodes:
        parent = "-" if b.parent is None else str(b.parent)
        if b.finite:
            lines.append(f"B{b.index}  parent={parent}  h={_rat(b.height)}  q={_rat(b.q)}  "
                         f"F={render(b.F)}  members={list(b.members)}")
        else:
            lines.append(f"B{b.index}  parent={parent}  leaf alpha{b.members[0]}")
    for p in an.tree.placements:
        where = f"B{p.node}"
        tag = "multiple root of f" if p.repeated else f"lc={_num(p.lc)}"
        lines.append(f"beta{p.beta_index} leaves at {where}  {tag}")
    return "\n".join(lines)


def cmd_eggers(f, args, out):
    an = _germ(f, args)
    if args.format == "json":
        return export.dumps(export.eggers_json(an.eggers))
    if args.format == "dot":
        return export.eggers_dot(an.eggers).rstrip("\n")
    lines = []
    for c in an.eggers.classes:
        parent = "-" if c.parent is None else str(c.parent)
        if c.finite:
            G = "-" if c.G is None else render(c.G, var="w")
            lines.append(f"[B{c.index}]  parent={parent}  nodes={list(c.members)}  h={_rat(c.height)}  "
                         f"q={_rat(c.q)}  n={c.n}  G={G}  t={c.t}")
        else:
            lines.append(f"[B{c.index}]  parent={parent}  branch (nodes {list(c.members)})")
    lines.append(f"leaves: {an.eggers.leaf_count}")
    return "\n".join(lines)


def cmd_special(f, args, out):
    an = _germ(f, args)
    rep = special_values(an, args.M)
    if args.format == "json":
        return export.dumps(rep.to_json())
    lines = [_num(v) for v in rep.values]
    lines.append(f"# M={rep.M}  count={len(rep.values)}  claim1={rep.claim1_sum}  d={rep.d}  "
                 f"zero={rep.zero_status}")
    return "\n".join(lines)


def cmd_spectrum(f, args, out):
    an = _germ(f, args)
    reports, other = special_values_all_M(an)
    if args.format == "json":
        return export.dumps({
            "spectrum": {str(M): r.to_json() for M, r in reports.items()},
            "non_integer_q": [_rat(q) for q in other],
        })
    lines = [f"M={M}: {_values_text(r.values)}" for M, r in reports.items()]
    if other:
        lines.append("non-integer q (no integer M): " + ", ".join(_rat(q) for q in other))
    if not lines:
        lines.append("no finite-height nodes")
    return "\n".join(lines)


def cmd_crit_inf(f, args, out):
    rep = critical_values_at_infinity(f, config.current().max_order)
    if args.format == "json":
        return export.dumps(rep.to_json())
    lines = [_num(v) for v in rep.critical_values]
    lines.append(f"# shear: {rep.shear.name}  branches at infinity: {rep.branch_count}  "
                 f"bound ok: {rep.bound_ok}  zero: {rep.zero_status}")
    return "\n".join(lines)


def cmd_branches(f, args, out):
    n = branches_at_infinity(f, config.current().max_order)
    if args.format == "json":
        return export.dumps({"branches_at_infinity": n})
    return str(n)


def _verify_checks(f, args):
    an = _germ(f, args)
    checks = []
    lemma = verify_derivative_lemma(an.tree, an.betas, an.repeated)
    checks.append(("derivative roots match lc_B(beta) at every node", all(r["ok"] for r in lemma)))
    checks.append(("q increases along every chain", not q_monotonicity_violations(an.tree)))
    checks.append(("sibling classes follow c1^n = c2^n", not sibling_conjugacy_check(an.eggers)))
    checks.append(("t([B]) equals the child count in E(f)", not child_count_mismatches(an.eggers)))
    conj = [conjugate_F_relation_check(an.eggers, c.index)["ok"] for c in an.eggers.classes]
    checks.append(("conjugate nodes have rotated F_B", all(conj)))
    bounds = bound_check(an)
    checks.append(("|values| <= sum t <= d and leaf audit for every M", bounds["ok"]))
    cross = certificate_crosscheck(an)
    checks.append(("special values agree with f(beta) certificates", cross["ok"]))
    return checks, bounds


def cmd_verify(f, args, out):
    checks, bounds = _verify_checks(f, args)
    ok = all(passed for _, passed in checks)
    if args.format == "json":
        text = export.dumps({
            "checks": [{"name": n, "ok": p} for n, p in checks],
            "bounds": [{k: v for k, v in r.items() if k != "classes"} for r in bounds["rows"]],
            "d": bounds["d"],
            "ok": ok,
        })
    else:
        lines = [f"{'PASS' if p else 'FAIL'}  {n}" for n, p in checks]
        for r in bounds["rows"]:
            lines.append(f"  M={r['M']}: {r['values']} <= {r['claim1']} <= {r['d']}")
        text = "\n".join(lines)
    if not ok:
        out.write(text + "\n")
        raise CliError("verification failed", EXIT_CHECK_FAILED)
    return text


COMMANDS = {
    "puiseux": (cmd_puiseux, "Newton-Puiseux roots with cycles and multiplicities"),
    "tree": (cmd_tree, "Kuo-Lu tree with F_B and q(B)"),
    "eggers": (cmd_eggers, "Eggers tree (conjugacy classes of nodes)"),
    "special": (cmd_special, "nonzero special values of f - t*l^M"),
    "spectrum": (cmd_spectrum, "special values for every integer polar invariant"),
    "crit-inf": (cmd_crit_inf, "nonzero critical values at infinity"),
    "branches": (cmd_branches, "number of branches at infinity"),
    "verify": (cmd_verify, "run the bound, lemma and certificate checks"),
}


def _global_options(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--precision", type=int, default=default(config.DEFAULT_PRECISION),
                        help="working precision in bits (>= 64)")
    parser.add_argument("--tol", type=float, default=default(None),
                        help="relative zero tolerance (default 2^-(precision/2))")
    parser.add_argument("--max-order", type=Fraction, default=default(None),
                        help="largest y-exponent explored before giving up")
    parser.add_argument("--format", choices=("text", "json", "dot"), default=default("text"))
    parser.add_argument("--seed", type=int, default=default(config.RunConfig.seed),
                        help="seed for generic-point sampling")


def build_parser():
    parser = argparse.ArgumentParser(prog="pencil", description=__doc__.splitlines()[0])
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        _global_options(p, suppress=True)
        p.add_argument("poly", nargs="?", default="-", help="polynomial in x, y (default: stdin)")
        if name in ("special", "spectrum", "tree", "eggers", "verify"):
            p.add_argument("--l", default=None, help="smooth germ l (default y)")
        if name == "special":
            p.add_argument("--M", type=int, required=True, help="exponent of l in the pencil")
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "dot" and args.command not in ("tree", "eggers"):
        parser.error("--format dot is only available for tree and eggers")
    text = sys.stdin.read() if args.poly == "-" else args.poly
    try:
        cfg = config.RunConfig(precision=args.precision, tol=args.tol, max_order=args.max_order,
                               seed=args.seed, format=args.format)
    except ValueError as exc:
        parser.error(str(exc))
    handler = COMMANDS[args.command][0]
    try:
        with config.configured(cfg):
            f = parse_poly(text)
            result = handler(f, args, stdout)
    except PolySyntaxError as exc:
        stderr.write(f"pencil: parse error: {exc}\n")
        return EXIT_PARSE
    except PreconditionError as exc:
        stderr.write(f"pencil: precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except CliError as exc:
        stderr.write(f"pencil: {exc}\n")
        return exc.code
    except (ArithmeticError, NoWitnessError) as exc:
        stderr.write(f"pencil: numeric failure: {exc}\n")
        return EXIT_NUMERIC
    stdout.write(result + "\n")
    return 0


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
