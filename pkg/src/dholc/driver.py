"""End-to-end pipeline: parse, expand, check, translate, discharge, report.

Discharge policy per obligation: local simplifier first, then the
finite-model oracle (when enabled), then the external prover (when
configured); the first positive verdict wins. An oracle counterexample
against a prover Theorem for the same goal signals a translation bug
and aborts the run.

Exit codes: 0 everything discharged and nothing refuted; 1 obligations
remaining or refuted; 2 parse or structural failure.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import atp, oracle
from .kernel import (
    Checker, CheckResult, KernelError, Obligation, Rejected, check_theory_into,
    simplify_obligation,
)
from .holcore import HolConjecture, HolTheory, emit_tptp
from .parser import ParseError, parse_theory, print_term, print_theory
from .syntax import (
    Assumption, Axiom, BOOL, ConstDecl, Conjecture, DefCheck, EMPTY_CONTEXT,
    TermDef, TypeDef, TypeSym, expand_definitions, expand_sugar,
    DefExpansionError,
)
from .translate import translate_conjecture, translate_obligation, translate_theory

DISCHARGED = "discharged"
REMAINING = "remaining"
REFUTED = "refuted"


@dataclass
class Options:
    oracle_size: int = 0
    oracle_budget: int = oracle.DEFAULT_BUDGET
    prover: Optional[str] = None
    timeout: float = 30.0
    jobs: int = 1
    emit_tptp_dir: Optional[str] = None
    report_path: Optional[str] = None
    qcod: bool = True
    raw_core: bool = False
    prove_conjectures: bool = False


@dataclass
class Outcome:
    id: str
    rule: str
    span: str
    goal: str
    verdict: str
    time: float = 0.0
    tptp_file: Optional[str] = None
    detail: str = ""

    @property
    def status(self) -> str:
        if self.verdict.startswith(("discharged", "finite-valid", "theorem")):
            return DISCHARGED
        if self.verdict.startswith(("counterexample", "countersatisfiable")):
            return REFUTED
        return REMAINING


class PipelineError(Exception):
    def __init__(self, message: str, exit_code: int = 2):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass
class RunResult:
    exit_code: int
    report: dict
    outcomes: list[Outcome] = field(default_factory=list)
    conjecture_outcomes: list[Outcome] = field(default_factory=list)
    checker: Optional[Checker] = None
    check: Optional[CheckResult] = None
    hol_theory: Optional[HolTheory] = None
    elaborated_conjectures: list = field(default_factory=list)


def _expand_all(units: list, conjectures: list[Conjecture]):
    out = []
    for u in units:
        match u:
            case TypeSym(n, tele):
                out.append(TypeSym(n, tuple((v, expand_sugar(t)) for v, t in tele), span=u.span))
            case ConstDecl(n, ty):
                out.append(ConstDecl(n, expand_sugar(ty), span=u.span))
            case Axiom(n, f):
                out.append(Axiom(n, expand_sugar(f), span=u.span))
            case DefCheck(TypeDef(n, tele, rhs)):
                out.append(DefCheck(TypeDef(
                    n, tuple((v, expand_sugar(t)) for v, t in tele),
                    expand_sugar(rhs), span=u.decl.span)))
            case DefCheck(TermDef(n, ty, rhs)):
                out.append(DefCheck(TermDef(n, expand_sugar(ty), expand_sugar(rhs), span=u.decl.span)))
            case _:
                raise PipelineError(f"unexpected unit {u!r}")
    conj = [Conjecture(c.name, expand_sugar(c.formula), span=c.span) for c in conjectures]
    return out, conj


def elaborate_file(path: str, opts: Options) -> RunResult:
    """Parse and check one theory file; no discharge yet."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        decls, conjectures = parse_theory(text, path)
        units, conjectures = expand_definitions(decls, conjectures)
        units, conjectures = _expand_all(units, conjectures)
    except (ParseError, DefExpansionError) as e:
        raise PipelineError(f"error: {e}")
    chk = Checker(qcod=opts.qcod)
    result = check_theory_into(chk, units)
    if not result.accepted:
        assert isinstance(result.status, Rejected)
        loc = f"{result.status.span}: " if result.status.span else ""
        raise PipelineError(f"error: {loc}{result.status.reason}")
    elaborated_conjectures = []
    for c in conjectures:
        try:
            f2 = chk.check_against(EMPTY_CONTEXT, c.formula, BOOL)
        except KernelError as e:
            raise PipelineError(f"error: conjecture {c.name}: {e}")
        elaborated_conjectures.append(Conjecture(c.name, f2, span=c.span))
    run = RunResult(0, {}, checker=chk, check=result)
    run.elaborated_conjectures = elaborated_conjectures
    run.hol_theory = translate_theory(chk.elaborated, raw=opts.raw_core)
    return run


def _theory_name(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _write_problem(
    directory: str, theory_name: str, conj: HolConjecture, hol_theory: HolTheory,
    raw: bool,
) -> str:
    os.makedirs(directory, exist_ok=True)
    fname = os.path.join(directory, f"{theory_name}__{conj.name}.p")
    with open(fname, "w", encoding="utf-8") as fh:
        fh.write(emit_tptp(hol_theory, conj, raw=raw))
    return fname


def _discharge(
    ob: Obligation,
    run: RunResult,
    opts: Options,
    theory_name: str,
    tptp_dir: Optional[str],
) -> Outcome:
    started = time.monotonic()
    out = Outcome(
        id=ob.id,
        rule=ob.rule,
        span=str(ob.span) if ob.span else "",
        goal=print_term(ob.goal),
        verdict=REMAINING,
    )
    reason = simplify_obligation(ob, run.checker.sig.axioms)
    if reason is not None:
        out.verdict = f"discharged(simplifier): {reason}"
        out.time = time.monotonic() - started
        return out
    conj = translate_obligation(ob, raw=opts.raw_core)
    oracle_refuted = None
    if opts.oracle_size > 0:
        verdict = oracle.check_valid_finite(
            run.hol_theory, conj.formula, opts.oracle_size, opts.oracle_budget
        )
        if isinstance(verdict, oracle.Valid):
            out.verdict = verdict.label()
            out.time = time.monotonic() - started
            return out
        if isinstance(verdict, oracle.Counterexample):
            oracle_refuted = verdict
            out.verdict = "counterexample"
            out.detail = oracle.format_model(verdict.model)
        else:
            out.detail = verdict.reason
    if opts.prover or tptp_dir:
        directory = tptp_dir or tempfile.mkdtemp(prefix="dholc-")
        out.tptp_file = _write_problem(
            directory, theory_name, conj, run.hol_theory, opts.raw_core
        )
    if opts.prover:
        verdict = atp.prove(out.tptp_file, opts.prover, opts.timeout)
        if out.tptp_file:
            with open(out.tptp_file + ".out", "w", encoding="utf-8") as fh:
                fh.write(verdict.output)
        if verdict.kind == atp.THEOREM:
            if oracle_refuted is not None:
                raise PipelineError(
                    f"error: oracle counterexample but prover Theorem on {ob.id}; "
                    "this indicates a translation bug"
                )
            out.verdict = "theorem"
        elif verdict.kind == atp.COUNTERSATISFIABLE and oracle_refuted is None:
            out.verdict = "countersatisfiable"
        elif oracle_refuted is None:
            out.verdict = f"remaining({verdict.kind})"
        out.detail = out.detail or verdict.message
    out.time = time.monotonic() - started
    return out


def run_check(path: str, opts: Options) -> RunResult:
    run = elaborate_file(path, opts)
    theory_name = _theory_name(path)
    obligations = run.check.obligations

    if opts.jobs > 1 and opts.prover:
        with ThreadPoolExecutor(max_workers=opts.jobs) as pool:
            run.outcomes = list(
                pool.map(
                    lambda ob: _discharge(ob, run, opts, theory_name, opts.emit_tptp_dir),
                    obligations,
                )
            )
    else:
        run.outcomes = [
            _discharge(ob, run, opts, theory_name, opts.emit_tptp_dir)
            for ob in obligations
        ]

    for c in run.elaborated_conjectures:
        started = time.monotonic()
        out = Outcome(
            id=c.name, rule="conjecture",
            span=str(c.span) if c.span else "", goal=print_term(c.formula),
            verdict="checked",
        )
        if opts.prove_conjectures:
            hc = translate_conjecture(c.name, c.formula, raw=opts.raw_core)
            out.verdict = REMAINING
            if opts.oracle_size > 0:
                verdict = oracle.check_valid_finite(
                    run.hol_theory, hc.formula, opts.oracle_size, opts.oracle_budget
                )
                if isinstance(verdict, oracle.Valid):
                    out.verdict = verdict.label()
                elif isinstance(verdict, oracle.Counterexample):
                    out.verdict = "counterexample"
                    out.detail = oracle.format_model(verdict.model)
            if out.verdict == REMAINING and (opts.prover or opts.emit_tptp_dir):
                directory = opts.emit_tptp_dir or tempfile.mkdtemp(prefix="dholc-")
                out.tptp_file = _write_problem(
                    directory, theory_name, hc, run.hol_theory, opts.raw_core
                )
                if opts.prover:
                    pv = atp.prove(out.tptp_file, opts.prover, opts.timeout)
                    with open(out.tptp_file + ".out", "w", encoding="utf-8") as fh:
                        fh.write(pv.output)
                    if pv.kind == atp.THEOREM:
                        out.verdict = "theorem"
                    elif pv.kind == atp.COUNTERSATISFIABLE:
                        out.verdict = "countersatisfiable"
                    else:
                        out.verdict = f"remaining({pv.kind})"
        elif opts.emit_tptp_dir:
            hc = translate_conjecture(c.name, c.formula, raw=opts.raw_core)
            out.tptp_file = _write_problem(
                opts.emit_tptp_dir, theory_name, hc, run.hol_theory, opts.raw_core
            )
        out.time = time.monotonic() - started
        run.conjecture_outcomes.append(out)

    run.report = build_report(theory_name, run)
    statuses = [o.status for o in run.outcomes]
    if opts.prove_conjectures:
        statuses += [o.status for o in run.conjecture_outcomes]
    if any(s == REFUTED for s in statuses):
        run.exit_code = 1
    elif any(s == REMAINING for s in statuses):
        run.exit_code = 1
    else:
        run.exit_code = 0
    if opts.report_path:
        with open(opts.report_path, "w", encoding="utf-8") as fh:
            json.dump(run.report, fh, indent=2)
            fh.write("\n")
    return run


def run_translate(path: str, out_dir: str, opts: Options) -> RunResult:
    """Emit one THF problem per obligation and per conjecture."""
    run = elaborate_file(path, opts)
    theory_name = _theory_name(path)
    os.makedirs(out_dir, exist_ok=True)
    for ob in run.check.obligations:
        conj = translate_obligation(ob, raw=opts.raw_core)
        fname = _write_problem(out_dir, theory_name, conj, run.hol_theory, opts.raw_core)
        run.outcomes.append(
            Outcome(ob.id, ob.rule, str(ob.span) if ob.span else "",
                    print_term(ob.goal), "translated", tptp_file=fname)
        )
    for c in run.elaborated_conjectures:
        hc = translate_conjecture(c.name, c.formula, raw=opts.raw_core)
        fname = _write_problem(out_dir, theory_name, hc, run.hol_theory, opts.raw_core)
        run.conjecture_outcomes.append(
            Outcome(c.name, "conjecture", str(c.span) if c.span else "",
                    print_term(c.formula), "translated", tptp_file=fname)
        )
    run.report = build_report(theory_name, run)
    run.exit_code = 0
    return run


def build_report(theory_name: str, run: RunResult) -> dict:
    obligations = []
    discharged = remaining = refuted = 0
    for o in run.outcomes:
        if o.verdict != "translated":
            if o.status == DISCHARGED:
                discharged += 1
            elif o.status == REFUTED:
                refuted += 1
            else:
                remaining += 1
        entry = {
            "id": o.id,
            "rule": o.rule,
            "span": o.span,
            "dholGoal": o.goal,
            "tptpFile": o.tptp_file,
            "verdict": o.verdict,
            "time": round(o.time, 6),
        }
        if o.detail:
            entry["detail"] = o.detail
        obligations.append(entry)
    conjectures = []
    for o in run.conjecture_outcomes:
        entry = {
            "name": o.id,
            "verdict": o.verdict,
            "time": round(o.time, 6),
            "tptpFile": o.tptp_file,
        }
        if o.detail:
            entry["detail"] = o.detail
        conjectures.append(entry)
    return {
        "theory": theory_name,
        "obligations": obligations,
        "conjectures": conjectures,
        "warnings": list(run.checker.warnings) if run.checker else [],
        "summary": {
            "total": len(run.outcomes),
            "discharged": discharged,
            "remaining": remaining,
            "refuted": refuted,
        },
    }
