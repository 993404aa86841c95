"""Command-line front end.

Exit status: 0 positive verdict, 1 negative verdict, 2 input error,
3 resource limit, 4 decision procedures disagree.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import dlpa, oracle, rewrite
from .cnf import export_dimacs
from .models import InvalidModel, Universe, UniverseTooSmall, format_model, parse_model
from .rewrite import ResourceLimit
from .semantics import satisfies, successors
from .syntax import ParseError, parse_formula, parse_program, pretty_print, vars_of

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_RESOURCE, EXIT_DISAGREE = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("DLPAPAR_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"DLPAPAR_BUDGET must be an integer, got {env!r}") from None
    return rewrite.DEFAULT_BUDGET


def _universe(args, *parts) -> Universe:
    mentioned = set()
    for x in parts:
        if hasattr(x, "rd"):
            mentioned |= x.rd | x.v
        else:
            mentioned |= vars_of(x)
    if args.universe is None:
        return Universe(mentioned)
    names = [n.strip() for n in args.universe.split(",") if n.strip()]
    u = Universe(names)
    missing = mentioned - set(u.vars)
    if missing:
        raise UniverseTooSmall(f"--universe lacks {', '.join(sorted(missing))}")
    return u


def cmd_check(args) -> int:
    m = parse_model(args.model)
    f = parse_formula(args.formula)
    holds = satisfies(m, f, _universe(args, m, f))
    print("HOLDS" if holds else "FAILS")
    return EXIT_YES if holds else EXIT_NO


def cmd_run(args) -> int:
    m = parse_model(args.model)
    p = parse_program(args.program)
    out = sorted(format_model(x) for x in successors(m, p, _universe(args, m, p)))
    for line in out:
        print(line)
    return EXIT_YES if out else EXIT_NO


def _decide(args, valid: bool) -> int:
    f = parse_formula(args.formula)
    budget = _budget(args)
    fn = oracle.valid_by if valid else oracle.sat_by
    methods = oracle.METHODS if args.method == "all" else (args.method,)
    verdicts = {m: fn(m, f, budget) for m in methods}
    if len(set(verdicts.values())) > 1:
        detail = " ".join(f"{m}={v}" for m, v in verdicts.items())
        print(f"DISAGREEMENT {detail}", file=sys.stderr)
        return EXIT_DISAGREE
    yes = next(iter(verdicts.values()))
    if valid:
        print("VALID" if yes else "INVALID")
    else:
        print("SAT" if yes else "UNSAT")
    return EXIT_YES if yes else EXIT_NO


def cmd_sat(args) -> int:
    return _decide(args, valid=False)


def cmd_valid(args) -> int:
    return _decide(args, valid=True)


def cmd_reduce(args) -> int:
    f = parse_formula(args.formula)
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    out = rewrite.reduce(f, budget=_budget(args), trace=trace,
                         restrict_to_assigned=args.assigned_only)
    print(pretty_print(out))
    return EXIT_YES


def cmd_translate(args) -> int:
    x = parse_program(args.text) if args.program else parse_formula(args.text)
    print(pretty_print(dlpa.translate(x), dlpa=True))
    return EXIT_YES


def cmd_dimacs(args) -> int:
    f = rewrite.reduce(parse_formula(args.formula), budget=_budget(args))
    if args.out is None:
        manifest = export_dimacs(f, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            manifest = export_dimacs(f, fh)
    target = args.manifest or (args.out + ".map" if args.out else None)
    if target:
        with open(target, "w") as fh:
            fh.write(manifest)
    return EXIT_YES


def cmd_props(args) -> int:
    names = list(oracle.SUITES) if args.suite == ["all"] else args.suite
    limits = oracle.Limits(vars=args.vars, cases=args.cases, budget=_budget(args))
    ok = True
    for name in names:
        rep = oracle.run_suite(name, args.seed, limits)
        sys.stdout.write(rep.text())
        ok = ok and rep.ok
    return EXIT_YES if ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None,
                        help="node budget for reduction (default: $DLPAPAR_BUDGET or 10^6)")
    common.add_argument("--universe", default=None,
                        help="comma-separated variables to evaluate over")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trace", action="store_true",
                        help="print one line per applied reduction axiom to stderr")
    common.add_argument("--method", choices=("direct", "reduce", "translate", "all"),
                        default="direct")

    ap = argparse.ArgumentParser(prog="dlpapar", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="does a formula hold in a model")
    p.add_argument("model")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("run", parents=[common], help="list the successors of a model")
    p.add_argument("model")
    p.add_argument("program")
    p.set_defaults(fn=cmd_run)

    for name, fn in (("sat", cmd_sat), ("valid", cmd_valid)):
        p = sub.add_parser(name, parents=[common], help=f"decide {name}isfiability"
                           if name == "sat" else "decide validity")
        p.add_argument("formula")
        p.set_defaults(fn=fn)

    p = sub.add_parser("reduce", parents=[common], help="eliminate all modalities")
    p.add_argument("formula")
    p.add_argument("--assigned-only", action="store_true",
                   help="copy only +p/-p assigned variables in parallel compositions (unsound)")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("translate", parents=[common], help="translate into plain DL-PA")
    p.add_argument("text")
    p.add_argument("--program", action="store_true", help="the input is a program")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("dimacs", parents=[common], help="reduce and write DIMACS CNF")
    p.add_argument("formula")
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--manifest", default=None,
                   help="where to write the index-to-atom map (default: OUT.map)")
    p.set_defaults(fn=cmd_dimacs)

    p = sub.add_parser("props", parents=[common], help="run property suites")
    p.add_argument("suite", nargs="+", choices=list(oracle.SUITES) + ["all"])
    p.add_argument("--cases", type=int, default=oracle.DEFAULT_LIMITS.cases)
    p.add_argument("--vars", type=int, default=oracle.DEFAULT_LIMITS.vars)
    p.set_defaults(fn=cmd_props)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (InvalidModel, UniverseTooSmall, InputError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
    except ResourceLimit as exc:
        print(f"resource limit: {exc} (reached {exc.size} nodes)", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
