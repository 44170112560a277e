"""Command line interface.

    dholc check FILE       type-check and discharge obligations
    dholc prove FILE       check, then also prove the conjectures
    dholc translate FILE   emit THF problem files
    dholc normalize FILE NAME   print a type's normal form
"""

from __future__ import annotations

import argparse
import json
import sys

from . import atp, driver, oracle
from .kernel import Checker
from .parser import ParseError, parse_theory, parse_type_string, print_type
from .subtype import normalize_type
from .syntax import (
    ConstDecl, EMPTY_CONTEXT, DefExpansionError, TypeDef, expand_definitions,
    expand_sugar,
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prover", default=atp.default_prover_command(),
                   help="prover command template with {file} and optional "
                        f"{{timeout}} (default: ${atp.PROVER_ENV_VAR})")
    p.add_argument("--timeout", type=float, default=30.0,
                   help="prover timeout in seconds (default 30)")
    p.add_argument("--oracle-size", type=int, default=0, metavar="N",
                   help="finite-model oracle carrier bound (0 disables)")
    p.add_argument("--oracle-budget", type=int, default=oracle.DEFAULT_BUDGET,
                   help="evaluation step budget for the oracle")
    p.add_argument("--jobs", type=int, default=1,
                   help="concurrent prover processes")
    p.add_argument("--emit-tptp", metavar="DIR", default=None,
                   help="write THF problem files into DIR")
    p.add_argument("--report", metavar="PATH", default=None,
                   help="write the JSON report to PATH")
    p.add_argument("--no-quot-cod-axiom", action="store_true",
                   help="disable the quotient-codomain normalization law")
    p.add_argument("--raw-core", action="store_true",
                   help="emit pure equality encodings instead of native "
                        "connectives")


def _options(args: argparse.Namespace, prove: bool = False) -> driver.Options:
    return driver.Options(
        oracle_size=args.oracle_size,
        oracle_budget=args.oracle_budget,
        prover=args.prover,
        timeout=args.timeout,
        jobs=args.jobs,
        emit_tptp_dir=args.emit_tptp,
        report_path=args.report,
        qcod=not args.no_quot_cod_axiom,
        raw_core=args.raw_core,
        prove_conjectures=prove,
    )


def _print_summary(run: driver.RunResult) -> None:
    for o in run.outcomes:
        print(f"  [{o.id}] {o.rule}: {o.goal}")
        print(f"      -> {o.verdict}")
        if o.detail:
            for line in o.detail.splitlines():
                print(f"      {line}")
    for o in run.conjecture_outcomes:
        print(f"  [conjecture {o.id}] {o.goal}")
        print(f"      -> {o.verdict}")
    s = run.report.get("summary", {})
    print(
        f"obligations: {s.get('total', 0)} total, {s.get('discharged', 0)} "
        f"discharged, {s.get('remaining', 0)} remaining, "
        f"{s.get('refuted', 0)} refuted"
    )
    for w in run.report.get("warnings", []):
        print(f"warning: {w}")


def cmd_check(args: argparse.Namespace, prove: bool = False) -> int:
    try:
        run = driver.run_check(args.file, _options(args, prove=prove))
    except driver.PipelineError as e:
        print(str(e), file=sys.stderr)
        return e.exit_code
    _print_summary(run)
    return run.exit_code


def cmd_translate(args: argparse.Namespace) -> int:
    try:
        run = driver.run_translate(args.file, args.out_dir, _options(args))
    except driver.PipelineError as e:
        print(str(e), file=sys.stderr)
        return e.exit_code
    files = [o.tptp_file for o in run.outcomes + run.conjecture_outcomes if o.tptp_file]
    for f in files:
        print(f)
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    from .kernel import check_theory_into
    from .syntax import DefCheck, VarDecl

    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            decls, _ = parse_theory(fh.read(), args.file)
        units, _ = expand_definitions(decls, [])
        units, _ = driver._expand_all(units, [])
    except (ParseError, DefExpansionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    # locate the target type and the telescope context it lives in
    target = None
    telescope = ()
    if args.expr:
        try:
            raw = parse_type_string(args.expr)
            units2, _ = expand_definitions(decls + [TypeDef("_target", (), raw)], [])
            target = units2[-1].decl.rhs
        except (ParseError, DefExpansionError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
    else:
        if args.name is None:
            print("error: give a declared name or --expr", file=sys.stderr)
            return 2
        for u in units:
            if isinstance(u, DefCheck) and isinstance(u.decl, TypeDef) and u.decl.name == args.name:
                target, telescope = u.decl.rhs, u.decl.telescope
            elif isinstance(u, ConstDecl) and u.name == args.name:
                target = u.ty
    if target is None:
        print(f"error: no type definition or constant named {args.name!r}",
              file=sys.stderr)
        return 2

    chk = Checker(qcod=not args.no_quot_cod_axiom)
    kernel_units = [u for u in units if not isinstance(u, DefCheck)]
    result = check_theory_into(chk, kernel_units)
    if not result.accepted:
        print(f"error: {result.status.reason}", file=sys.stderr)
        return 2
    ctx = EMPTY_CONTEXT
    try:
        for v, ty in telescope:
            ctx = ctx.extend(VarDecl(v, chk.check_type(ctx, expand_sugar(ty))))
        norm, _ = normalize_type(chk, ctx, expand_sugar(target))
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(print_type(norm.as_type()))
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="dholc")
    sub = ap.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="type-check and discharge obligations")
    p_check.add_argument("file")
    _add_common(p_check)

    p_prove = sub.add_parser("prove", help="check and prove conjectures")
    p_prove.add_argument("file")
    _add_common(p_prove)

    p_tr = sub.add_parser("translate", help="emit THF problem files")
    p_tr.add_argument("file")
    p_tr.add_argument("out_dir")
    _add_common(p_tr)

    p_norm = sub.add_parser("normalize", help="print a type's normal form")
    p_norm.add_argument("file")
    p_norm.add_argument("name", nargs="?", default=None)
    p_norm.add_argument("--expr", default=None,
                        help="normalize this type expression instead of a "
                             "declared name")
    p_norm.add_argument("--no-quot-cod-axiom", action="store_true")

    args = ap.parse_args(argv)
    if args.command == "check":
        return cmd_check(args)
    if args.command == "prove":
        return cmd_check(args, prove=True)
    if args.command == "translate":
        return cmd_translate(args)
    if args.command == "normalize":
        return cmd_normalize(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
