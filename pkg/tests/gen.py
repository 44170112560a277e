"""Seeded random generators for property tests.

Everything is driven by random.Random instances so test runs are
reproducible; no global randomness.
"""

from __future__ import annotations

import random

from dholc.syntax import (
    And, App, Axiom, Base, Bool, BOOL, ConstDecl, Const, Eq, Exists, FalseLit,
    Forall, Iff, Implies, Lam, Not, Or, Pi, Quotient, Refine, Term, TrueLit,
    TypeExpr, TypeSym, Var,
)

_NAMES = ["u", "v", "w", "p", "q", "r"]


def random_term(rng: random.Random, depth: int = 5, scope: tuple[str, ...] = ()) -> Term:
    """Arbitrary (possibly ill-typed) surface term for syntactic
    properties; identifiers are Var nodes, as the parser produces."""
    if depth <= 0 or rng.random() < 0.25:
        pool: list[Term] = [Var("c0"), Var("c1"), TrueLit(), FalseLit()]
        pool += [Var(v) for v in scope] or [Var("x0")]
        return rng.choice(pool)
    kind = rng.randrange(9)
    if kind == 0:
        v = rng.choice(_NAMES) + str(rng.randrange(3))
        return Lam(v, random_type(rng, depth - 1, scope), random_term(rng, depth - 1, scope + (v,)))
    if kind == 1:
        return App(random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope))
    if kind == 2:
        at = random_type(rng, depth - 1, scope) if rng.random() < 0.5 else None
        return Eq(random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope), at)
    if kind == 3:
        return Implies(random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope))
    if kind == 4:
        return Not(random_term(rng, depth - 1, scope))
    if kind == 5:
        cls = rng.choice([And, Or, Iff])
        return cls(random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope))
    if kind == 6:
        v = rng.choice(_NAMES) + str(rng.randrange(3))
        cls = rng.choice([Forall, Exists])
        return cls(v, random_type(rng, depth - 1, scope), random_term(rng, depth - 1, scope + (v,)))
    return App(random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope))


def random_type(rng: random.Random, depth: int = 3, scope: tuple[str, ...] = ()) -> TypeExpr:
    if depth <= 0 or rng.random() < 0.4:
        return rng.choice([BOOL, Base("b0"), Base("b1")])
    kind = rng.randrange(4)
    if kind == 0:
        v = rng.choice(_NAMES) + str(rng.randrange(3))
        return Pi(v, random_type(rng, depth - 1, scope), random_type(rng, depth - 1, scope + (v,)))
    if kind == 1:
        return Refine(random_type(rng, depth - 1, scope), random_term(rng, depth - 1, scope))
    if kind == 2:
        return Quotient(random_type(rng, depth - 1, scope), random_term(rng, depth - 1, scope))
    return Base("b0")


# ---------------------------------------------------------------------------
# Well-typed theories (refinement/quotient free) for conservativity


def random_plain_theory(rng: random.Random) -> list:
    """A small well-typed theory: base types, a dependent symbol, typed
    constants. No refinements or quotients."""
    decls: list = [TypeSym("nt"), TypeSym("ob")]
    decls.append(ConstDecl("z", Base("nt")))
    decls.append(ConstDecl("s", Pi("_", Base("nt"), Base("nt"))))
    if rng.random() < 0.7:
        decls.append(ConstDecl("add", Pi("_", Base("nt"), Pi("_", Base("nt"), Base("nt")))))
    decls.append(TypeSym("vec", (("n", Base("nt")),)))
    decls.append(ConstDecl("vnil", Base("vec", (Const("z"),))))
    if rng.random() < 0.6:
        decls.append(
            ConstDecl(
                "vext",
                Pi("n", Base("nt"),
                   Pi("_", Base("vec", (Var("n"),)),
                      Base("vec", (App(Const("s"), Var("n")),)))),
            )
        )
    return decls


def random_nat_term(rng: random.Random, depth: int, scope: tuple[str, ...], has_add: bool) -> Term:
    if depth <= 0 or rng.random() < 0.35:
        pool: list[Term] = [Const("z")]
        pool += [Var(v) for v in scope]
        return rng.choice(pool)
    if has_add and rng.random() < 0.5:
        return App(
            App(Const("add"), random_nat_term(rng, depth - 1, scope, has_add)),
            random_nat_term(rng, depth - 1, scope, has_add),
        )
    return App(Const("s"), random_nat_term(rng, depth - 1, scope, has_add))


def random_plain_type_pair(
    rng: random.Random, has_add: bool, scope: tuple[str, ...] = ()
) -> tuple[TypeExpr, TypeExpr]:
    """Two structurally matching refinement/quotient-free types that may
    differ in base-type arguments."""
    kind = rng.randrange(4)
    if kind == 0:
        return BOOL, BOOL
    if kind == 1:
        return Base("nt"), Base("nt")
    if kind == 2:
        a1 = random_nat_term(rng, 2, scope, has_add)
        a2 = a1 if rng.random() < 0.5 else random_nat_term(rng, 2, scope, has_add)
        return Base("vec", (a1,)), Base("vec", (a2,))
    d1, d2 = random_plain_type_pair(rng, has_add, scope)
    v = "n" + str(rng.randrange(3))
    c1, c2 = random_plain_type_pair(rng, has_add, scope + (v,))
    return Pi(v, d1, c1), Pi(v, d2, c2)


# ---------------------------------------------------------------------------
# Well-typed theories incl. refinements/quotients for translation checks


def random_rich_theory(rng: random.Random) -> tuple[list, list[tuple[Term, TypeExpr]]]:
    """A well-typed theory plus sample (term, type) pairs the kernel
    accepts; used to exercise the translation invariants."""
    decls: list = [TypeSym("el"), TypeSym("st")]
    decls.append(ConstDecl("e0", Base("el")))
    decls.append(ConstDecl("ins", Pi("_", Base("el"), Pi("_", Base("st"), Base("st")))))
    decls.append(ConstDecl("emp", Base("st")))
    decls.append(ConstDecl("ok", Pi("_", Base("st"), BOOL)))
    decls.append(Axiom("ok_emp", App(Const("ok"), Const("emp"))))
    pairs: list[tuple[Term, TypeExpr]] = [
        (Const("e0"), Base("el")),
        (Const("emp"), Base("st")),
        (App(App(Const("ins"), Const("e0")), Const("emp")), Base("st")),
        (Lam("x", Base("st"), App(Const("ok"), Var("x"))), Pi("x", Base("st"), BOOL)),
    ]
    if rng.random() < 0.7:
        # a refinement of states by the ok predicate
        decls.append(ConstDecl("good", Refine(Base("st"), Const("ok"))))
        pairs.append((Const("good"), Base("st")))
    if rng.random() < 0.7:
        # a quotient of states by an abstract equivalence
        decls.append(
            ConstDecl("sim", Pi("_", Base("st"), Pi("_", Base("st"), BOOL)))
        )
        x, y, z = Var("x"), Var("y"), Var("z")
        decls.append(Axiom("sim_refl", Forall("x", Base("st"), App(App(Const("sim"), x), x))))
        decls.append(
            Axiom("sim_sym", Forall("x", Base("st"), Forall("y", Base("st"),
                  Implies(App(App(Const("sim"), x), y), App(App(Const("sim"), y), x)))))
        )
        decls.append(
            Axiom("sim_trans",
                  Forall("x", Base("st"), Forall("y", Base("st"), Forall("z", Base("st"),
                        Implies(App(App(Const("sim"), x), y),
                                Implies(App(App(Const("sim"), y), z),
                                        App(App(Const("sim"), x), z)))))))
        )
        decls.append(ConstDecl("cls", Quotient(Base("st"), Const("sim"))))
        pairs.append((Const("emp"), Quotient(Base("st"), Const("sim"))))
    if rng.random() < 0.5:
        decls.append(
            Axiom("ins_ok",
                  Forall("e", Base("el"), Forall("s", Base("st"),
                        Implies(App(Const("ok"), Var("s")),
                                App(Const("ok"), App(App(Const("ins"), Var("e")), Var("s")))))))
        )
    return decls, pairs
