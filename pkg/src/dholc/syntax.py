"""Core abstract syntax for the dependently typed logic.

Terms and types are immutable dataclasses. The kernel core is exactly
{Const, Var, Lam, App, Eq, Implies, QuotElim}; the remaining term
constructors (true/false/not/and/or/iff/forall/exists) are definitional
sugar that `expand_sugar` eliminates before anything reaches the kernel.
`resugar` folds the exact expansion images back for printing.

Equality nodes carry the type the equality is taken at; the surface
language lets users omit it (`at is None`) and elaboration fills it in.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Union


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


def _span_field() -> object:
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Bool:
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Base:
    name: str
    args: tuple["Term", ...] = ()
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Pi:
    var: str
    domain: "TypeExpr"
    codomain: "TypeExpr"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Refine:
    base: "TypeExpr"
    pred: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Quotient:
    base: "TypeExpr"
    rel: "Term"
    span: Optional[Span] = _span_field()


TypeExpr = Union[Bool, Base, Pi, Refine, Quotient]

BOOL = Bool()


def arrow(a: TypeExpr, b: TypeExpr) -> Pi:
    """Non-dependent function type; the binder never occurs in b."""
    return Pi("_", a, b)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Const:
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Var:
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Lam:
    var: str
    annot: TypeExpr
    body: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Eq:
    lhs: "Term"
    rhs: "Term"
    at: Optional[TypeExpr] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Implies:
    hyp: "Term"
    concl: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class QuotElim:
    """`use scrutinee as var : carrier return motive in body`.

    Eliminates a term of a quotient type: body is checked with var a
    representative of scrutinee's class, and the kernel emits the
    invariance obligation that body does not depend on the choice.
    """

    scrutinee: "Term"
    var: str
    carrier: TypeExpr
    body: "Term"
    motive: TypeExpr
    span: Optional[Span] = _span_field()


# Surface-only sugar constructors.


@dataclass(frozen=True)
class TrueLit:
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class FalseLit:
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Not:
    arg: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class And:
    lhs: "Term"
    rhs: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Or:
    lhs: "Term"
    rhs: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Iff:
    lhs: "Term"
    rhs: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Forall:
    var: str
    ty: TypeExpr
    body: "Term"
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Exists:
    var: str
    ty: TypeExpr
    body: "Term"
    span: Optional[Span] = _span_field()


Term = Union[
    Const, Var, Lam, App, Eq, Implies, QuotElim,
    TrueLit, FalseLit, Not, And, Or, Iff, Forall, Exists,
]

SUGAR_NODES = (TrueLit, FalseLit, Not, And, Or, Iff, Forall, Exists)


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


# ---------------------------------------------------------------------------
# Theories, contexts, declarations


@dataclass(frozen=True)
class TypeSym:
    name: str
    telescope: tuple[tuple[str, TypeExpr], ...] = ()
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class ConstDecl:
    name: str
    ty: TypeExpr
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Axiom:
    name: str
    formula: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TypeDef:
    name: str
    telescope: tuple[tuple[str, TypeExpr], ...]
    rhs: TypeExpr
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TermDef:
    name: str
    ty: TypeExpr
    rhs: Term
    span: Optional[Span] = _span_field()


TheoryDecl = Union[TypeSym, ConstDecl, Axiom, TypeDef, TermDef]


@dataclass(frozen=True)
class Conjecture:
    name: str
    formula: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class VarDecl:
    name: str
    ty: TypeExpr
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Assumption:
    name: str
    formula: Term
    span: Optional[Span] = _span_field()


ContextEntry = Union[VarDecl, Assumption]


@dataclass(frozen=True)
class Context:
    entries: tuple[ContextEntry, ...] = ()

    def extend(self, *more: ContextEntry) -> "Context":
        return Context(self.entries + more)

    def lookup_var(self, name: str) -> Optional[TypeExpr]:
        for e in reversed(self.entries):
            if isinstance(e, VarDecl) and e.name == name:
                return e.ty
        return None

    def var_names(self) -> set[str]:
        return {e.name for e in self.entries if isinstance(e, VarDecl)}

    def assumptions(self) -> Iterator[tuple[str, Term]]:
        for e in self.entries:
            if isinstance(e, Assumption):
                yield e.name, e.formula

    def __iter__(self) -> Iterator[ContextEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


EMPTY_CONTEXT = Context()


# ---------------------------------------------------------------------------
# Free variables


def free_vars(x: Union[Term, TypeExpr]) -> frozenset[str]:
    match x:
        case Bool():
            return frozenset()
        case Base(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= free_vars(a)
            return out
        case Pi(v, dom, cod):
            return free_vars(dom) | (free_vars(cod) - {v})
        case Refine(b, p):
            return free_vars(b) | free_vars(p)
        case Quotient(b, r):
            return free_vars(b) | free_vars(r)
        case Const(_):
            return frozenset()
        case Var(n):
            return frozenset({n})
        case Lam(v, annot, body):
            return free_vars(annot) | (free_vars(body) - {v})
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Eq(l, r, at):
            out = free_vars(l) | free_vars(r)
            if at is not None:
                out |= free_vars(at)
            return out
        case Implies(h, c):
            return free_vars(h) | free_vars(c)
        case QuotElim(s, v, carrier, body, motive):
            inner = (free_vars(body) | free_vars(motive)) - {v}
            return free_vars(s) | free_vars(carrier) | inner
        case TrueLit() | FalseLit():
            return frozenset()
        case Not(a):
            return free_vars(a)
        case And(l, r) | Or(l, r) | Iff(l, r):
            return free_vars(l) | free_vars(r)
        case Forall(v, ty, body) | Exists(v, ty, body):
            return free_vars(ty) | (free_vars(body) - {v})
    raise TypeError(f"free_vars: unexpected node {x!r}")


_FRESH_SPLIT = None


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """Fresh variable name: the original with a numeric suffix appended."""
    if base not in avoid:
        return base
    root = base.rstrip("0123456789") or base
    i = 1
    while f"{root}{i}" in avoid:
        i += 1
    return f"{root}{i}"


# ---------------------------------------------------------------------------
# Substitution (capture avoiding, defined on terms and types)


def subst(x: Union[Term, TypeExpr], var: str, value: Term):
    """Capture-avoiding substitution of `value` for `var` in a term or type."""
    fv_value = free_vars(value)

    def go_ty(t: TypeExpr) -> TypeExpr:
        match t:
            case Bool():
                return t
            case Base(n, args):
                return Base(n, tuple(go(a) for a in args))
            case Pi(v, dom, cod):
                dom2 = go_ty(dom)
                if v == var:
                    return Pi(v, dom2, cod)
                if v in fv_value and var in free_vars(cod):
                    v2 = fresh_name(v, set(fv_value) | free_vars(cod) | {var})
                    cod = rename_ty(cod, v, v2)
                    return Pi(v2, dom2, go_ty(cod))
                return Pi(v, dom2, go_ty(cod))
            case Refine(b, p):
                return Refine(go_ty(b), go(p))
            case Quotient(b, r):
                return Quotient(go_ty(b), go(r))
        raise TypeError(f"subst: unexpected type node {t!r}")

    def go(t: Term) -> Term:
        match t:
            case Const(_):
                return t
            case Var(n):
                return value if n == var else t
            case Lam(v, annot, body):
                annot2 = go_ty(annot)
                if v == var:
                    return Lam(v, annot2, body)
                if v in fv_value and var in free_vars(body):
                    v2 = fresh_name(v, set(fv_value) | free_vars(body) | {var})
                    body = rename(body, v, v2)
                    return Lam(v2, annot2, go(body))
                return Lam(v, annot2, go(body))
            case App(f, a):
                return App(go(f), go(a))
            case Eq(l, r, at):
                return Eq(go(l), go(r), None if at is None else go_ty(at))
            case Implies(h, c):
                return Implies(go(h), go(c))
            case QuotElim(s, v, carrier, body, motive):
                s2 = go(s)
                carrier2 = go_ty(carrier)
                if v == var:
                    return QuotElim(s2, v, carrier2, body, motive)
                if v in fv_value and var in (free_vars(body) | free_vars(motive)):
                    v2 = fresh_name(
                        v, set(fv_value) | free_vars(body) | free_vars(motive) | {var}
                    )
                    body = rename(body, v, v2)
                    motive = rename_ty(motive, v, v2)
                    return QuotElim(s2, v2, carrier2, go(body), go_ty(motive))
                return QuotElim(s2, v, carrier2, go(body), go_ty(motive))
            case TrueLit() | FalseLit():
                return t
            case Not(a):
                return Not(go(a))
            case And(l, r):
                return And(go(l), go(r))
            case Or(l, r):
                return Or(go(l), go(r))
            case Iff(l, r):
                return Iff(go(l), go(r))
            case Forall(v, ty, body) | Exists(v, ty, body):
                cls = type(t)
                ty2 = go_ty(ty)
                if v == var:
                    return cls(v, ty2, body)
                if v in fv_value and var in free_vars(body):
                    v2 = fresh_name(v, set(fv_value) | free_vars(body) | {var})
                    body = rename(body, v, v2)
                    return cls(v2, ty2, go(body))
                return cls(v, ty2, go(body))
        raise TypeError(f"subst: unexpected term node {t!r}")

    if isinstance(x, (Bool, Base, Pi, Refine, Quotient)):
        return go_ty(x)
    return go(x)


def rename(t: Term, old: str, new: str) -> Term:
    return subst(t, old, Var(new))


def rename_ty(t: TypeExpr, old: str, new: str) -> TypeExpr:
    return subst(t, old, Var(new))


def subst_many(x: Union[Term, TypeExpr], pairs: list[tuple[str, Term]]):
    """Simultaneous capture-avoiding substitution.

    Sequential substitution would alias when a later variable occurs in
    an earlier replacement (or vice versa); route through fresh names.
    """
    if not pairs:
        return x
    avoid: set[str] = set()
    for v, t in pairs:
        avoid.add(v)
        avoid |= set(free_vars(t))
    avoid |= set(free_vars(x))
    staged = []
    for v, t in pairs:
        tmp = fresh_name(f"{v}_tmp", avoid)
        avoid.add(tmp)
        x = subst(x, v, Var(tmp))
        staged.append((tmp, t))
    for tmp, t in staged:
        x = subst(x, tmp, t)
    return x


# ---------------------------------------------------------------------------
# Alpha equality

# Eq nodes compare their annotation types too; a missing annotation only
# matches a missing annotation. Sugar is expanded before comparing, so a
# surface formula and its core image are alpha-equal.


def alpha_eq(a: Union[Term, TypeExpr], b: Union[Term, TypeExpr]) -> bool:
    return _alpha(expand_sugar(a), expand_sugar(b), {}, {})


def _alpha(a, b, env_a: dict, env_b: dict) -> bool:
    if isinstance(a, (Bool, Base, Pi, Refine, Quotient)) != isinstance(
        b, (Bool, Base, Pi, Refine, Quotient)
    ):
        return False
    match a, b:
        case Bool(), Bool():
            return True
        case Base(n1, args1), Base(n2, args2):
            return (
                n1 == n2
                and len(args1) == len(args2)
                and all(_alpha(x, y, env_a, env_b) for x, y in zip(args1, args2))
            )
        case Pi(v1, d1, c1), Pi(v2, d2, c2):
            if not _alpha(d1, d2, env_a, env_b):
                return False
            mark = len(env_a) + len(env_b)
            return _alpha(c1, c2, {**env_a, v1: mark}, {**env_b, v2: mark})
        case Refine(b1, p1), Refine(b2, p2):
            return _alpha(b1, b2, env_a, env_b) and _alpha(p1, p2, env_a, env_b)
        case Quotient(b1, r1), Quotient(b2, r2):
            return _alpha(b1, b2, env_a, env_b) and _alpha(r1, r2, env_a, env_b)
        case Const(n1), Const(n2):
            return n1 == n2
        case Var(n1), Var(n2):
            if n1 in env_a or n2 in env_b:
                return env_a.get(n1) == env_b.get(n2) and n1 in env_a and n2 in env_b
            return n1 == n2
        case Lam(v1, t1, b1), Lam(v2, t2, b2):
            if not _alpha(t1, t2, env_a, env_b):
                return False
            mark = len(env_a) + len(env_b)
            return _alpha(b1, b2, {**env_a, v1: mark}, {**env_b, v2: mark})
        case App(f1, a1), App(f2, a2):
            return _alpha(f1, f2, env_a, env_b) and _alpha(a1, a2, env_a, env_b)
        case Eq(l1, r1, t1), Eq(l2, r2, t2):
            if (t1 is None) != (t2 is None):
                return False
            if t1 is not None and not _alpha(t1, t2, env_a, env_b):
                return False
            return _alpha(l1, l2, env_a, env_b) and _alpha(r1, r2, env_a, env_b)
        case Implies(h1, c1), Implies(h2, c2):
            return _alpha(h1, h2, env_a, env_b) and _alpha(c1, c2, env_a, env_b)
        case QuotElim(s1, v1, ca1, b1, m1), QuotElim(s2, v2, ca2, b2, m2):
            if not (_alpha(s1, s2, env_a, env_b) and _alpha(ca1, ca2, env_a, env_b)):
                return False
            mark = len(env_a) + len(env_b)
            ea = {**env_a, v1: mark}
            eb = {**env_b, v2: mark}
            return _alpha(b1, b2, ea, eb) and _alpha(m1, m2, ea, eb)
    return False


# ---------------------------------------------------------------------------
# Definitional sugar


def _true_core() -> Term:
    idf = Lam("x", BOOL, Var("x"))
    return Eq(idf, idf, Pi("x", BOOL, BOOL))


def _false_core() -> Term:
    # false := forall x:bool. x
    return Eq(
        Lam("x", BOOL, Var("x")),
        Lam("x", BOOL, _true_core()),
        Pi("x", BOOL, BOOL),
    )


TRUE_CORE = _true_core()
FALSE_CORE = _false_core()


def expand_sugar(x: Union[Term, TypeExpr]):
    """Eliminate every sugar constructor, yielding a kernel-core term/type."""
    match x:
        case Bool() | Base() | Pi() | Refine() | Quotient():
            match x:
                case Bool():
                    return x
                case Base(n, args):
                    return Base(n, tuple(expand_sugar(a) for a in args), span=x.span)
                case Pi(v, d, c):
                    return Pi(v, expand_sugar(d), expand_sugar(c), span=x.span)
                case Refine(b, p):
                    return Refine(expand_sugar(b), expand_sugar(p), span=x.span)
                case Quotient(b, r):
                    return Quotient(expand_sugar(b), expand_sugar(r), span=x.span)
        case Const() | Var():
            return x
        case Lam(v, annot, body):
            return Lam(v, expand_sugar(annot), expand_sugar(body), span=x.span)
        case App(f, a):
            return App(expand_sugar(f), expand_sugar(a), span=x.span)
        case Eq(l, r, at):
            return Eq(
                expand_sugar(l),
                expand_sugar(r),
                None if at is None else expand_sugar(at),
                span=x.span,
            )
        case Implies(h, c):
            return Implies(expand_sugar(h), expand_sugar(c), span=x.span)
        case QuotElim(s, v, carrier, body, motive):
            return QuotElim(
                expand_sugar(s),
                v,
                expand_sugar(carrier),
                expand_sugar(body),
                expand_sugar(motive),
                span=x.span,
            )
        case TrueLit():
            return TRUE_CORE
        case FalseLit():
            return FALSE_CORE
        case Not(a):
            return Implies(expand_sugar(a), FALSE_CORE)
        case And(l, r):
            # dependent conjunction: ~(F => ~G)
            return expand_sugar(Not(Implies(l, Not(r))))
        case Or(l, r):
            return expand_sugar(Implies(Not(l), r))
        case Iff(l, r):
            return Eq(expand_sugar(l), expand_sugar(r), BOOL)
        case Forall(v, ty, body):
            ty2 = expand_sugar(ty)
            return Eq(
                Lam(v, ty2, expand_sugar(body)),
                Lam(v, ty2, TRUE_CORE),
                Pi(v, ty2, BOOL),
            )
        case Exists(v, ty, body):
            return expand_sugar(Not(Forall(v, ty, Not(body))))
    raise TypeError(f"expand_sugar: unexpected node {x!r}")


def is_true_core(t: Term) -> bool:
    return isinstance(t, (TrueLit,)) or _alpha(t, TRUE_CORE, {}, {})


def _resugar_node(t: Term) -> Term:
    """One resugaring pass at a single node; children already resugared."""
    match t:
        case Eq(Lam(v1, Bool(), Var(b1)), Lam(v2, Bool(), Var(b2)), Pi(_, Bool(), Bool())) if (
            v1 == b1 and v2 == b2
        ):
            return TrueLit()
        case Eq(Lam(v1, Bool(), Var(b1)), Lam(_, Bool(), TrueLit()), Pi(_, Bool(), Bool())) if (
            v1 == b1
        ):
            return FalseLit()
        case Eq(Lam(v1, ty1, body), Lam(_, ty2, TrueLit()), Pi(_, ty3, Bool())) if (
            alpha_eq(ty1, ty2) and alpha_eq(ty1, ty3)
        ):
            return Forall(v1, ty1, body)
        case Eq(l, r, Bool()):
            return Iff(l, r)
        case Implies(h, FalseLit()):
            return Not(h)
        case Not(Implies(h, Not(c))):
            return And(h, c)
        case Not(Forall(v, ty, Not(body))):
            return Exists(v, ty, body)
        case Implies(Not(h), c):
            return Or(h, c)
    return t


def resugar(t: Term) -> Term:
    """Fold expansion images back into sugar (best effort, bottom up)."""

    def go(t: Term) -> Term:
        match t:
            case Const() | Var() | TrueLit() | FalseLit():
                out = t
            case Lam(v, annot, body):
                out = Lam(v, resugar_ty(annot), go(body), span=t.span)
            case App(f, a):
                out = App(go(f), go(a), span=t.span)
            case Eq(l, r, at):
                out = Eq(go(l), go(r), None if at is None else resugar_ty(at), span=t.span)
            case Implies(h, c):
                out = Implies(go(h), go(c), span=t.span)
            case QuotElim(s, v, carrier, body, motive):
                out = QuotElim(go(s), v, resugar_ty(carrier), go(body), resugar_ty(motive), span=t.span)
            case Not(a):
                out = Not(go(a), span=t.span)
            case And(l, r):
                out = And(go(l), go(r), span=t.span)
            case Or(l, r):
                out = Or(go(l), go(r), span=t.span)
            case Iff(l, r):
                out = Iff(go(l), go(r), span=t.span)
            case Forall(v, ty, body):
                out = Forall(v, resugar_ty(ty), go(body), span=t.span)
            case Exists(v, ty, body):
                out = Exists(v, resugar_ty(ty), go(body), span=t.span)
            case _:
                raise TypeError(f"resugar: unexpected node {t!r}")
        while True:
            out2 = _resugar_node(out)
            if out2 is out:
                return out
            out = out2

    return go(t)


def resugar_ty(t: TypeExpr) -> TypeExpr:
    match t:
        case Bool():
            return t
        case Base(n, args):
            return Base(n, tuple(resugar(a) for a in args), span=t.span)
        case Pi(v, d, c):
            return Pi(v, resugar_ty(d), resugar_ty(c), span=t.span)
        case Refine(b, p):
            return Refine(resugar_ty(b), resugar(p), span=t.span)
        case Quotient(b, r):
            return Quotient(resugar_ty(b), resugar(r), span=t.span)
    raise TypeError(f"resugar_ty: unexpected node {t!r}")


# ---------------------------------------------------------------------------
# Beta (and optional eta) normalization


def beta_normalize(x: Union[Term, TypeExpr], eta: bool = False):
    """Normalize under beta; with eta=True also contract \\x. f x -> f."""

    def go_ty(t: TypeExpr) -> TypeExpr:
        match t:
            case Bool():
                return t
            case Base(n, args):
                return Base(n, tuple(go(a) for a in args))
            case Pi(v, d, c):
                return Pi(v, go_ty(d), go_ty(c))
            case Refine(b, p):
                return Refine(go_ty(b), go(p))
            case Quotient(b, r):
                return Quotient(go_ty(b), go(r))
        raise TypeError(f"beta_normalize: unexpected type {t!r}")

    def go(t: Term) -> Term:
        match t:
            case Const() | Var() | TrueLit() | FalseLit():
                return t
            case Lam(v, annot, body):
                body2 = go(body)
                if (
                    eta
                    and isinstance(body2, App)
                    and isinstance(body2.arg, Var)
                    and body2.arg.name == v
                    and v not in free_vars(body2.fn)
                ):
                    return go(body2.fn)
                return Lam(v, go_ty(annot), body2)
            case App(f, a):
                f2 = go(f)
                a2 = go(a)
                if isinstance(f2, Lam):
                    return go(subst(f2.body, f2.var, a2))
                return App(f2, a2)
            case Eq(l, r, at):
                return Eq(go(l), go(r), None if at is None else go_ty(at))
            case Implies(h, c):
                return Implies(go(h), go(c))
            case QuotElim(s, v, carrier, body, motive):
                return QuotElim(go(s), v, go_ty(carrier), go(body), go_ty(motive))
            case Not(a):
                return Not(go(a))
            case And(l, r):
                return And(go(l), go(r))
            case Or(l, r):
                return Or(go(l), go(r))
            case Iff(l, r):
                return Iff(go(l), go(r))
            case Forall(v, ty, body):
                return Forall(v, go_ty(ty), go(body))
            case Exists(v, ty, body):
                return Exists(v, go_ty(ty), go(body))
        raise TypeError(f"beta_normalize: unexpected term {t!r}")

    if isinstance(x, (Bool, Base, Pi, Refine, Quotient)):
        return go_ty(x)
    return go(x)


def alpha_beta_eq(a: Union[Term, TypeExpr], b: Union[Term, TypeExpr]) -> bool:
    if isinstance(a, (Bool, Base, Pi, Refine, Quotient)):
        ea, eb = expand_sugar(a), expand_sugar(b)
    else:
        ea, eb = expand_sugar(a), expand_sugar(b)
    return _alpha(beta_normalize(ea), beta_normalize(eb), {}, {})


# ---------------------------------------------------------------------------
# Definition expansion (TypeDef / TermDef are transparent abbreviations)


@dataclass(frozen=True)
class DefCheck:
    """A checkable event produced by expanding a definition.

    The kernel verifies the definition's body once at its declaration
    point; all later occurrences are expanded away.
    """

    decl: Union[TypeDef, TermDef]


def expand_definitions(
    decls: list[TheoryDecl], conjectures: list[Conjecture]
) -> tuple[list, list[Conjecture]]:
    """Expand TypeDef/TermDef occurrences; keep DefCheck events in order.

    Returns (units, conjectures) where units interleave kernel-ready
    declarations with DefCheck markers and every remaining term/type is
    definition-free.
    """
    type_defs: dict[str, TypeDef] = {}
    term_defs: dict[str, Term] = {}

    def exp_ty(t: TypeExpr, bound: frozenset[str] = frozenset()) -> TypeExpr:
        match t:
            case Bool():
                return t
            case Base(n, args):
                args2 = tuple(exp(a, bound) for a in args)
                if n in type_defs:
                    d = type_defs[n]
                    if len(args2) != len(d.telescope):
                        raise DefExpansionError(
                            f"type definition {n} expects {len(d.telescope)} "
                            f"argument(s), got {len(args2)}",
                            t.span,
                        )
                    return subst_many(
                        d.rhs, [(v, a) for (v, _), a in zip(d.telescope, args2)]
                    )
                return Base(n, args2, span=t.span)
            case Pi(v, d, c):
                return Pi(v, exp_ty(d, bound), exp_ty(c, bound | {v}), span=t.span)
            case Refine(b, p):
                return Refine(exp_ty(b, bound), exp(p, bound), span=t.span)
            case Quotient(b, r):
                return Quotient(exp_ty(b, bound), exp(r, bound), span=t.span)
        raise TypeError(f"expand_definitions: unexpected type {t!r}")

    def exp(t: Term, bound: frozenset[str] = frozenset()) -> Term:
        match t:
            case Const(n):
                return term_defs.get(n, t)
            case Var(n):
                # identifiers parse as variables; resolve defined names here
                if n not in bound and n in term_defs:
                    return term_defs[n]
                return t
            case Lam(v, annot, body):
                return Lam(v, exp_ty(annot, bound), exp(body, bound | {v}), span=t.span)
            case App(f, a):
                return App(exp(f, bound), exp(a, bound), span=t.span)
            case Eq(l, r, at):
                return Eq(
                    exp(l, bound), exp(r, bound),
                    None if at is None else exp_ty(at, bound), span=t.span,
                )
            case Implies(h, c):
                return Implies(exp(h, bound), exp(c, bound), span=t.span)
            case QuotElim(s, v, carrier, body, motive):
                b2 = bound | {v}
                return QuotElim(
                    exp(s, bound), v, exp_ty(carrier, bound),
                    exp(body, b2), exp_ty(motive, b2), span=t.span,
                )
            case TrueLit() | FalseLit():
                return t
            case Not(a):
                return Not(exp(a, bound), span=t.span)
            case And(l, r):
                return And(exp(l, bound), exp(r, bound), span=t.span)
            case Or(l, r):
                return Or(exp(l, bound), exp(r, bound), span=t.span)
            case Iff(l, r):
                return Iff(exp(l, bound), exp(r, bound), span=t.span)
            case Forall(v, ty, body):
                return Forall(v, exp_ty(ty, bound), exp(body, bound | {v}), span=t.span)
            case Exists(v, ty, body):
                return Exists(v, exp_ty(ty, bound), exp(body, bound | {v}), span=t.span)
        raise TypeError(f"expand_definitions: unexpected term {t!r}")

    units: list = []
    for d in decls:
        match d:
            case TypeSym(n, tele):
                tele2 = tuple((v, exp_ty(ty)) for v, ty in tele)
                units.append(TypeSym(n, tele2, span=d.span))
            case ConstDecl(n, ty):
                units.append(ConstDecl(n, exp_ty(ty), span=d.span))
            case Axiom(n, f):
                units.append(Axiom(n, exp(f), span=d.span))
            case TypeDef(n, tele, rhs):
                tele2 = tuple((v, exp_ty(ty)) for v, ty in tele)
                d2 = TypeDef(n, tele2, exp_ty(rhs), span=d.span)
                units.append(DefCheck(d2))
                type_defs[n] = d2
            case TermDef(n, ty, rhs):
                d2 = TermDef(n, exp_ty(ty), exp(rhs), span=d.span)
                units.append(DefCheck(d2))
                term_defs[n] = d2.rhs
            case _:
                raise TypeError(f"expand_definitions: unexpected decl {d!r}")
    conj2 = [Conjecture(c.name, exp(c.formula), span=c.span) for c in conjectures]
    return units, conj2


class DefExpansionError(Exception):
    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.span = span


def resolve_constants(x: Union[Term, TypeExpr], const_names) -> Union[Term, TypeExpr]:
    """Replace free Var nodes naming declared constants with Const nodes.

    The parser cannot distinguish constants from variables; the kernel
    resolves them during elaboration, and this performs the same
    resolution on a standalone term (useful for comparing parsed
    formulas against elaborated ones).
    """
    names = set(const_names)

    def go(t, bound: frozenset[str]):
        match t:
            case Var(n):
                return Const(n) if n in names and n not in bound else t
            case Const(_) | TrueLit() | FalseLit() | Bool():
                return t
            case Base(n, args):
                return Base(n, tuple(go(a, bound) for a in args))
            case Pi(v, d, c):
                return Pi(v, go(d, bound), go(c, bound | {v}))
            case Refine(b, p):
                return Refine(go(b, bound), go(p, bound))
            case Quotient(b, r):
                return Quotient(go(b, bound), go(r, bound))
            case Lam(v, a, b):
                return Lam(v, go(a, bound), go(b, bound | {v}))
            case App(f, a):
                return App(go(f, bound), go(a, bound))
            case Eq(l, r, at):
                return Eq(go(l, bound), go(r, bound), None if at is None else go(at, bound))
            case Implies(h, c):
                return Implies(go(h, bound), go(c, bound))
            case QuotElim(s, v, ca, b, m):
                b2 = bound | {v}
                return QuotElim(go(s, bound), v, go(ca, bound), go(b, b2), go(m, b2))
            case Not(a):
                return Not(go(a, bound))
            case And(l, r):
                return And(go(l, bound), go(r, bound))
            case Or(l, r):
                return Or(go(l, bound), go(r, bound))
            case Iff(l, r):
                return Iff(go(l, bound), go(r, bound))
            case Forall(v, ty, b):
                return Forall(v, go(ty, bound), go(b, bound | {v}))
            case Exists(v, ty, b):
                return Exists(v, go(ty, bound), go(b, bound | {v}))
        raise TypeError(f"resolve_constants: unexpected node {t!r}")

    return go(x, frozenset())
