"""Type normalization and subtype checking.

Every type normalizes to a quotient of a refinement of a core type,
where cores are bool, applied base types, and function types whose
domain may retain a single refinement. The rewrite laws:

  RR    (A|p)|q          ->  A | (\\x. p x /\\ q x)
  QQ    (A/r)/r'         ->  A / r'
  RQ    (A/r)|p          ->  (A|p) / r
  QDom  (x:A/r) -> B     ->  ((x:A) -> B) | (respects r pointwise)
  RDom  (x:A|p) -> B     ->  ((x:A) -> B) / (agree on p-elements)
  QCod  (x:A) -> B/r     ->  ((x:A) -> B) / (pointwise r)
  RCod  (x:A) -> B|p     ->  ((x:A) -> B) | (image satisfies p)

applied innermost-first to a fixpoint; each law strictly reduces the
number of refinements/quotients under a function arrow. RDom is only
sound as a rewrite when the codomain neither mentions the bound
variable nor needs the refinement assumption to be well-formed; when
the test fails the refined domain stays in the core. QCod encodes a
choice principle and can be disabled, in which case quotient codomains
stay in the core.

Subtype checking compares normal forms: cores structurally (function
types contravariant in the domain), then one predicate-implication and
one relation-implication obligation; for refinement/quotient-free
types it coincides with type equality and delegates to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    And, App, Base, Bool, Context, Eq, Forall, Implies, Lam, Pi, Quotient,
    Refine, Span, Term, TRUE_CORE, TypeExpr, Var, VarDecl, alpha_eq, apps,
    beta_normalize, expand_sugar, free_vars, fresh_name, rename_ty,
)


@dataclass(frozen=True)
class NormalType:
    """Denotes Quotient(Refine(core, pred), rel); None means trivial."""

    core: TypeExpr
    pred: Optional[Term] = None
    rel: Optional[Term] = None

    def as_type(self) -> TypeExpr:
        t: TypeExpr = self.core
        if self.pred is not None:
            t = Refine(t, self.pred)
        if self.rel is not None:
            t = Quotient(t, self.rel)
        return t

    def pred_term(self) -> Term:
        if self.pred is not None:
            return self.pred
        return Lam("x", self.core, TRUE_CORE)

    def rel_term(self) -> Term:
        if self.rel is not None:
            return self.rel
        refined = Refine(self.core, self.pred) if self.pred is not None else self.core
        return Lam("x", refined, Lam("y", refined, Eq(Var("x"), Var("y"), refined)))


def contains_refinement_or_quotient(ty: TypeExpr) -> bool:
    match ty:
        case Refine() | Quotient():
            return True
        case Pi(_, d, c):
            return contains_refinement_or_quotient(d) or contains_refinement_or_quotient(c)
        case _:
            return False


def _trivial_pred(p: Term, *bases: TypeExpr) -> bool:
    return any(alpha_eq(p, Lam("x", b, TRUE_CORE)) for b in bases)


def _trivial_rel(r: Term, *bases: TypeExpr) -> bool:
    return any(
        alpha_eq(r, Lam("x", b, Lam("y", b, Eq(Var("x"), Var("y"), b)))) for b in bases
    )


def _core_of(t: TypeExpr) -> TypeExpr:
    while isinstance(t, (Refine, Quotient)):
        t = t.base
    return t


def _fresh(base: str, *avoid_from) -> str:
    avoid: set[str] = set()
    for x in avoid_from:
        if isinstance(x, Context):
            avoid |= x.var_names()
        elif isinstance(x, str):
            avoid.add(x)
        elif x is not None:
            avoid |= set(free_vars(x))
    return fresh_name(base, avoid)


def _merge_refine(t: TypeExpr, pred: Term) -> TypeExpr:
    """Attach a refinement to a canonically nested type (laws RQ, RR)."""
    match t:
        case Quotient(base, rel):
            return Quotient(_merge_refine(base, pred), rel)
        case Refine(core, inner):
            x = _fresh("x", inner, pred, core)
            merged = Lam(
                x, core, And(App(inner, Var(x)), App(pred, Var(x)))
            )
            return Refine(core, beta_normalize(expand_sugar(merged)))
        case _:
            return Refine(t, pred)


def _merge_quot(t: TypeExpr, rel: Term) -> TypeExpr:
    """Attach a quotient to a canonically nested type (law QQ)."""
    match t:
        case Quotient(base, _):
            return Quotient(base, rel)
        case _:
            return Quotient(t, rel)


def _rdom_applies(chk, ctx: Context, var: str, dom_base: TypeExpr, cod: TypeExpr) -> bool:
    """A refined domain may be rewritten away only when the codomain is
    independent of the bound variable and checks cleanly without the
    refinement assumption."""
    if var in free_vars(cod):
        return False
    from . import kernel as _kernel

    probe = _kernel.Checker(qcod=chk.qcod)
    probe.sig = chk.sig
    try:
        probe.check_type(ctx.extend(VarDecl(var, dom_base)), cod)
    except _kernel.KernelError:
        return False
    return not probe.obligations


def _law_var(x: str, *scope) -> str:
    """Quantifier name for the Pi binder in a generated law; `_` binders
    (non-dependent arrows) get a readable name when that cannot capture."""
    if x.startswith("_") and all(s is None or x not in free_vars(s) for s in scope):
        return "x"
    return x


def _qdom_pred(ctx: Context, x: str, dom_base: TypeExpr, cod: TypeExpr, rel: Term) -> Term:
    x = _law_var(x, cod)
    f = _fresh("f", ctx, rel, cod, dom_base, x)
    x1 = _fresh(x + "1", ctx, rel, cod, x)
    pi = Pi(x, dom_base, cod)
    body = Forall(
        x, dom_base,
        Forall(
            x1, dom_base,
            Implies(
                apps(rel, Var(x), Var(x1)),
                Eq(App(Var(f), Var(x)), App(Var(f), Var(x1)), cod),
            ),
        ),
    )
    return beta_normalize(expand_sugar(Lam(f, pi, body)))


def _rdom_rel(ctx: Context, x: str, dom_base: TypeExpr, cod: TypeExpr, pred: Term) -> Term:
    x = _law_var(x, cod)
    f = _fresh("f", ctx, pred, cod, dom_base, x)
    g = _fresh("g", ctx, pred, cod, dom_base, x, f)
    pi = Pi(x, dom_base, cod)
    body = Forall(
        x, dom_base,
        Implies(
            App(pred, Var(x)),
            Eq(App(Var(f), Var(x)), App(Var(g), Var(x)), cod),
        ),
    )
    return beta_normalize(expand_sugar(Lam(f, pi, Lam(g, pi, body))))


def _qcod_rel(ctx: Context, x: str, dom: TypeExpr, cod_base: TypeExpr, rel: Term) -> Term:
    x = _law_var(x, cod_base, rel)
    f = _fresh("f", ctx, rel, cod_base, dom, x)
    g = _fresh("g", ctx, rel, cod_base, dom, x, f)
    pi = Pi(x, dom, cod_base)
    body = Forall(x, dom, apps(rel, App(Var(f), Var(x)), App(Var(g), Var(x))))
    return beta_normalize(expand_sugar(Lam(f, pi, Lam(g, pi, body))))


def _rcod_pred(ctx: Context, x: str, dom: TypeExpr, cod_base: TypeExpr, pred: Term) -> Term:
    x = _law_var(x, cod_base, pred)
    f = _fresh("f", ctx, pred, cod_base, dom, x)
    pi = Pi(x, dom, cod_base)
    body = Forall(x, dom, App(pred, App(Var(f), Var(x))))
    return beta_normalize(expand_sugar(Lam(f, pi, body)))


def _norm(chk, ctx: Context, ty: TypeExpr, qcod: bool) -> TypeExpr:
    match ty:
        case Bool() | Base():
            return ty
        case Refine(base, pred):
            nb = _norm(chk, ctx, base, qcod)
            if _trivial_pred(pred, base, _core_of(nb)):
                return nb
            return _merge_refine(nb, pred)
        case Quotient(base, rel):
            nb = _norm(chk, ctx, base, qcod)
            if _trivial_rel(rel, base, _core_of(nb)):
                return nb
            return _merge_quot(nb, rel)
        case Pi(x, dom, cod):
            ndom = _norm(chk, ctx, dom, qcod)
            ncod = _norm(chk, ctx.extend(VarDecl(x, ndom)), cod, qcod)
            return _peel(chk, ctx, x, ndom, ncod, qcod)
    raise TypeError(f"normalize: unexpected type {ty!r}")


def _peel(chk, ctx: Context, x: str, dom: TypeExpr, cod: TypeExpr, qcod: bool) -> TypeExpr:
    if isinstance(dom, Quotient):
        pred = _qdom_pred(ctx, x, dom.base, cod, dom.rel)
        inner = _peel(chk, ctx, x, dom.base, cod, qcod)
        return _merge_refine(inner, pred)
    if isinstance(dom, Refine) and _rdom_applies(chk, ctx, x, dom.base, cod):
        rel = _rdom_rel(ctx, x, dom.base, cod, dom.pred)
        inner = _peel(chk, ctx, x, dom.base, cod, qcod)
        return _merge_quot(inner, rel)
    if isinstance(cod, Quotient) and qcod:
        rel = _qcod_rel(ctx, x, dom, cod.base, cod.rel)
        inner = _peel(chk, ctx, x, dom, cod.base, qcod)
        return _merge_quot(inner, rel)
    if isinstance(cod, Refine):
        pred = _rcod_pred(ctx, x, dom, cod.base, cod.pred)
        inner = _peel(chk, ctx, x, dom, cod.base, qcod)
        return _merge_refine(inner, pred)
    return Pi(x, dom, cod)


def _decompose(t: TypeExpr) -> NormalType:
    rel = None
    pred = None
    if isinstance(t, Quotient):
        rel = t.rel
        t = t.base
    if isinstance(t, Refine):
        pred = t.pred
        t = t.base
    return NormalType(t, pred, rel)


def normalize_type(
    chk, ctx: Context, ty: TypeExpr, qcod: Optional[bool] = None
) -> tuple[NormalType, list]:
    """Normal form of ty plus any well-formedness obligations (none in
    practice: the applicability test for refined domains only fires the
    rewrite when the codomain re-checks without new obligations)."""
    if qcod is None:
        qcod = getattr(chk, "qcod", True)
    return _decompose(_norm(chk, ctx, ty, qcod)), []


def match_cores(chk, ctx: Context, a: TypeExpr, b: TypeExpr, span: Optional[Span]) -> None:
    """Structural comparison of normal-form cores; function types are
    contravariant in the domain and covariant in the codomain."""
    from . import kernel as _kernel

    if alpha_eq(a, b):
        return
    match a, b:
        case Bool(), Bool():
            return
        case Base(n1, _), Base(n2, _) if n1 == n2:
            chk.base_args_equal(ctx, a, b, span)
            return
        case Pi(x, d1, c1), Pi(y, d2, c2):
            subtype_check(chk, ctx, d2, d1, span)
            z = _fresh(x, ctx, c1, c2)
            subtype_check(
                chk,
                ctx.extend(VarDecl(z, d2)),
                rename_ty(c1, x, z),
                rename_ty(c2, y, z),
                span,
            )
            return
    raise _kernel.KernelError(
        "structurally incompatible types: "
        f"{type(a).__name__} core cannot be a subtype of {type(b).__name__} core",
        span,
    )


def subtype_check(
    chk, ctx: Context, a: TypeExpr, b: TypeExpr, span: Optional[Span] = None
) -> None:
    """Reduce `a` being a subtype of `b` to validity obligations."""
    if alpha_eq(a, b):
        return
    if not contains_refinement_or_quotient(a) and not contains_refinement_or_quotient(b):
        # on refinement/quotient-free types subtyping collapses to equality
        chk.type_equal(ctx, a, b, span)
        return
    na, _ = normalize_type(chk, ctx, a)
    nb, _ = normalize_type(chk, ctx, b)
    match_cores(chk, ctx, na.core, nb.core, span)

    from .syntax import Assumption

    if nb.pred is not None and not (na.pred is not None and alpha_eq(na.pred, nb.pred)):
        x = _fresh("x", ctx, na.pred, nb.pred, na.core)
        entries = [VarDecl(x, na.core)]
        if na.pred is not None:
            entries.append(
                Assumption(chk.fresh_hyp(), beta_normalize(App(na.pred, Var(x))))
            )
        chk.emit(ctx.extend(*entries), App(nb.pred, Var(x)), "subtPsubCong", span)

    if na.rel is None:
        # unquotiented source: the target relation holds by its own
        # reflexivity (obligated at formation) under x = y
        return
    if nb.rel is not None and alpha_eq(na.rel, nb.rel):
        return
    x = _fresh("x", ctx, na.pred, na.rel, nb.rel, na.core)
    y = _fresh("y", ctx, na.pred, na.rel, nb.rel, na.core, x)
    entries = [VarDecl(x, na.core), VarDecl(y, na.core)]
    if na.pred is not None:
        entries.append(Assumption(chk.fresh_hyp(), beta_normalize(App(na.pred, Var(x)))))
        entries.append(Assumption(chk.fresh_hyp(), beta_normalize(App(na.pred, Var(y)))))
    entries.append(
        Assumption(chk.fresh_hyp(), beta_normalize(apps(na.rel, Var(x), Var(y))))
    )
    if nb.rel is None:
        goal: Term = Eq(Var(x), Var(y), na.core)
    else:
        goal = apps(nb.rel, Var(x), Var(y))
    chk.emit(ctx.extend(*entries), goal, "subtQuotCong", span)
