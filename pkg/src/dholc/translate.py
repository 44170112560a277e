"""Translation of the dependent language into simply typed HOL.

Dependency erasure: an applied base type collapses to its head symbol,
function types to simple arrows, refinements and quotients to their
underlying erased type. Precision is recovered by a partial equivalence
relation per type: each n-ary type symbol `a` gets an (n+2)-ary
predicate `rel_a` plus symmetry, transitivity and collapse-to-equality
axioms; each constant gets a typing axiom stating it is in relation
with itself.

Equality at a type translates to that type's PER. Function types use
the logical-relation clause (related inputs go to related outputs);
refinements conjoin the predicate on both sides; quotients conjoin the
user relation with membership of both sides in the underlying PER.

By default, recognizable connective/quantifier images translate to
native HOL connectives, with a diagonal PER guard on quantified
variables; raw=True keeps the pure equality encodings throughout.
"""

from __future__ import annotations

from typing import Optional, Union

from .holcore import (
    HArrow, HBOOL, HBase, HConst, HEq, HExists, HForall, HIff, HImplies,
    HLam, HApp, HTrue, HFalse, HNot, HAnd, HOr, HVar, HolConjecture,
    HolTerm, HolTheory, HolType, hand, happs, hol_free_vars, hol_subst,
)
from .kernel import Obligation
from .syntax import (
    And, App, Assumption, Axiom, Base, Bool, ConstDecl, Const, Context, Eq,
    Exists, FalseLit, Forall, Iff, Implies, Lam, Not, Or, Pi, QuotElim,
    Quotient, Refine, Term, TrueLit, TypeExpr, TypeSym, Var, VarDecl,
    free_vars, fresh_name, rename_ty, resugar,
)


class TranslateError(Exception):
    pass


def rel_name(type_sym: str) -> str:
    return f"rel_{type_sym}"


def typing_axiom_name(const: str) -> str:
    return f"typing_{const}"


def translate_type(ty: TypeExpr) -> HolType:
    match ty:
        case Bool():
            return HBOOL
        case Base(name, _):
            return HBase(name)
        case Pi(_, dom, cod):
            return HArrow(translate_type(dom), translate_type(cod))
        case Refine(base, _):
            return translate_type(base)
        case Quotient(base, _):
            return translate_type(base)
    raise TranslateError(f"untranslatable type {ty!r}")


def hol_beta(t: HolTerm) -> HolTerm:
    match t:
        case HApp(f, a):
            f2, a2 = hol_beta(f), hol_beta(a)
            if isinstance(f2, HLam):
                return hol_beta(hol_subst(f2.body, f2.var, a2))
            return HApp(f2, a2)
        case HLam(v, ty, b):
            return HLam(v, ty, hol_beta(b))
        case HEq(l, r, at):
            return HEq(hol_beta(l), hol_beta(r), at)
        case HImplies(l, r):
            return HImplies(hol_beta(l), hol_beta(r))
        case HAnd(l, r):
            return HAnd(hol_beta(l), hol_beta(r))
        case HOr(l, r):
            return HOr(hol_beta(l), hol_beta(r))
        case HIff(l, r):
            return HIff(hol_beta(l), hol_beta(r))
        case HNot(a):
            return HNot(hol_beta(a))
        case HForall(v, ty, b):
            return HForall(v, ty, hol_beta(b))
        case HExists(v, ty, b):
            return HExists(v, ty, hol_beta(b))
        case _:
            return t


def per_relation(ty: TypeExpr, s: HolTerm, t: HolTerm, raw: bool = False) -> HolTerm:
    """The PER for ty applied to the two translated terms."""
    match ty:
        case Bool():
            return HEq(s, t, HBOOL)
        case Base(name, args):
            targs = [translate_term(a, raw=raw) for a in args]
            return happs(HConst(rel_name(name)), *targs, s, t)
        case Pi(x, dom, cod):
            avoid = set(hol_free_vars(s)) | set(hol_free_vars(t)) | set(free_vars(cod))
            hx = fresh_name(x if not x.startswith("_") else "x", avoid)
            hy = fresh_name("y" if hx != "y" else "y1", avoid | {hx})
            cod2 = cod if hx == x else rename_ty(cod, x, hx)
            ht = translate_type(dom)
            return HForall(
                hx, ht,
                HForall(
                    hy, ht,
                    HImplies(
                        per_relation(dom, HVar(hx), HVar(hy), raw=raw),
                        per_relation(cod2, HApp(s, HVar(hx)), HApp(t, HVar(hy)), raw=raw),
                    ),
                ),
            )
        case Refine(base, pred):
            p = translate_term(pred, raw=raw)
            return hand(
                per_relation(base, s, t, raw=raw),
                hol_beta(HApp(p, s)),
                hol_beta(HApp(p, t)),
            )
        case Quotient(base, rel):
            r = translate_term(rel, raw=raw)
            return hand(
                hol_beta(happs(r, s, t)),
                per_relation(base, s, s, raw=raw),
                per_relation(base, t, t, raw=raw),
            )
    raise TranslateError(f"untranslatable type {ty!r}")


def typing_predicate(ty: TypeExpr, t: HolTerm, raw: bool = False) -> HolTerm:
    """Membership of t in ty's PER domain: the diagonal of the PER."""
    return per_relation(ty, t, t, raw=raw)


def _guard_trivial(g: HolTerm) -> bool:
    return isinstance(g, HTrue) or (
        isinstance(g, HEq) and g.lhs == g.rhs and isinstance(g.lhs, HVar)
    )


def translate_term(t: Term, raw: bool = False) -> HolTerm:
    """Translate an elaborated core term.

    With raw=False, images of definable connectives and quantifiers are
    rendered with native HOL connectives; a quantified variable gets a
    diagonal PER guard unless it is trivial.
    """
    if not raw:
        t = resugar(t)

    def go(t: Term) -> HolTerm:
        match t:
            case Const(n):
                return HConst(n)
            case Var(n):
                return HVar(n)
            case Lam(v, annot, body):
                return HLam(v, translate_type(annot), go(body))
            case App(f, a):
                return HApp(go(f), go(a))
            case Eq(l, r, at):
                if at is None:
                    raise TranslateError("equality without annotation reached translation")
                return per_relation(at, go(l), go(r), raw=raw)
            case Implies(h, c):
                return HImplies(go(h), go(c))
            case QuotElim(scrut, v, _, body, _):
                return hol_subst(go(body), v, go(scrut))
            case TrueLit():
                return HTrue()
            case FalseLit():
                return HFalse()
            case Not(a):
                return HNot(go(a))
            case And(l, r):
                return HAnd(go(l), go(r))
            case Or(l, r):
                return HOr(go(l), go(r))
            case Iff(l, r):
                return HIff(go(l), go(r))
            case Forall(v, ty, body):
                guard = typing_predicate(ty, HVar(v), raw=raw)
                inner = go(body)
                if not _guard_trivial(guard):
                    inner = HImplies(guard, inner)
                return HForall(v, translate_type(ty), inner)
            case Exists(v, ty, body):
                guard = typing_predicate(ty, HVar(v), raw=raw)
                inner = go(body)
                if not _guard_trivial(guard):
                    inner = HAnd(guard, inner)
                return HExists(v, translate_type(ty), inner)
        raise TranslateError(f"untranslatable term {t!r}")

    return hol_beta(go(t))


def _per_axioms(name: str, telescope) -> list[tuple[str, HolTerm]]:
    """Symmetry, transitivity and collapse axioms for one type symbol."""
    tele_names = []
    used: set[str] = {"u", "v", "w"}
    for v, _ in telescope:
        v2 = fresh_name(v, used)
        used.add(v2)
        tele_names.append(v2)
    args = [HVar(v) for v in tele_names]
    u, v, w = HVar("u"), HVar("v"), HVar("w")
    a = HBase(name)
    rel = HConst(rel_name(name))

    def close(body: HolTerm, extra: list[tuple[str, HolType]]) -> HolTerm:
        for nm, ty in reversed(extra):
            body = HForall(nm, ty, body)
        for nm, (_, t0) in zip(reversed(tele_names), reversed(telescope)):
            body = HForall(nm, translate_type(t0), body)
        return body

    r_uv = happs(rel, *args, u, v)
    r_vw = happs(rel, *args, v, w)
    r_uw = happs(rel, *args, u, w)
    r_vu = happs(rel, *args, v, u)
    r_vv = happs(rel, *args, v, v)
    trans = close(
        HImplies(r_uv, HImplies(r_vw, r_uw)),
        [("u", a), ("v", a), ("w", a)],
    )
    sym = close(HImplies(r_uv, r_vu), [("u", a), ("v", a)])
    collapse = close(
        HImplies(r_vv, HIff(r_uv, HEq(u, v, a))),
        [("u", a), ("v", a)],
    )
    return [
        (f"{name}_trans", trans),
        (f"{name}_sym", sym),
        (f"{name}_per", collapse),
    ]


def translate_theory(decls: list, raw: bool = False) -> HolTheory:
    """Translate an elaborated declaration list into the HOL image."""
    th = HolTheory()
    taken: set[str] = set()

    def claim(n: str) -> str:
        if n in taken:
            raise TranslateError(f"generated name collides: {n!r}")
        taken.add(n)
        return n

    for d in decls:
        match d:
            case TypeSym(name, telescope):
                th.type_syms.append(claim(name))
                rel_ty = [translate_type(t) for _, t in telescope]
                th.consts.append(
                    (claim(rel_name(name)),
                     _arrows(rel_ty + [HBase(name), HBase(name)], HBOOL))
                )
                for an, ax in _per_axioms(name, telescope):
                    th.axioms.append((claim(an), ax))
            case ConstDecl(name, ty):
                th.consts.append((claim(name), translate_type(ty)))
                th.axioms.append(
                    (claim(typing_axiom_name(name)),
                     hol_beta(typing_predicate(ty, HConst(name), raw=raw)))
                )
            case Axiom(name, formula):
                th.axioms.append((claim(name), translate_term(formula, raw=raw)))
            case _:
                raise TranslateError(f"untranslatable declaration {d!r}")
    return th


def _arrows(doms: list[HolType], cod: HolType) -> HolType:
    out = cod
    for d in reversed(doms):
        out = HArrow(d, out)
    return out


def translate_context(
    ctx: Context, raw: bool = False
) -> tuple[list[tuple[str, HolType]], list[tuple[str, HolTerm]]]:
    """HOL variables and assumptions for a checking context."""
    hol_vars: list[tuple[str, HolType]] = []
    assumptions: list[tuple[str, HolTerm]] = []
    for e in ctx:
        if isinstance(e, VarDecl):
            hol_vars.append((e.name, translate_type(e.ty)))
            guard = hol_beta(typing_predicate(e.ty, HVar(e.name), raw=raw))
            if not _guard_trivial(guard):
                assumptions.append((f"typing_{e.name}", guard))
        else:
            assumptions.append((e.name, translate_term(e.formula, raw=raw)))
    return hol_vars, assumptions


def translate_obligation(ob: Obligation, raw: bool = False) -> HolConjecture:
    """Universally closed HOL conjecture for one obligation."""
    formula = translate_term(ob.goal, raw=raw)
    for e in reversed(ob.context.entries):
        if isinstance(e, VarDecl):
            guard = hol_beta(typing_predicate(e.ty, HVar(e.name), raw=raw))
            if not _guard_trivial(guard):
                formula = HImplies(guard, formula)
            formula = HForall(e.name, translate_type(e.ty), formula)
        else:
            formula = HImplies(translate_term(e.formula, raw=raw), formula)
    return HolConjecture(ob.id, formula, source_obligation=ob.id)


def translate_conjecture(name: str, formula: Term, raw: bool = False) -> HolConjecture:
    return HolConjecture(name, translate_term(formula, raw=raw), source_obligation=name)
