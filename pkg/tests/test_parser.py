import random

import pytest

from dholc.parser import (
    ParseError, parse_term_string, parse_theory, parse_type_string,
    print_term, print_theory, print_type,
)
from dholc.syntax import (
    App, Base, Bool, Const, ConstDecl, Eq, Lam, Pi, Quotient, Refine, TypeSym,
    Var, alpha_eq, free_vars,
)

from conftest import corpus_path
from gen import random_term, random_type


def test_parse_basic_decls():
    decls, conjectures = parse_theory("type nat  const zero : nat")
    assert decls == [TypeSym("nat", ()), ConstDecl("zero", Base("nat"))]
    assert conjectures == []


def test_parse_dependent_type_symbol():
    decls, _ = parse_theory("type nat\ntype llist (n : nat)")
    assert decls[1] == TypeSym("llist", (("n", Base("nat")),))


def test_parse_empty_file():
    assert parse_theory("") == ([], [])
    assert parse_theory("# only a comment\n") == ([], [])


def test_print_refinement():
    t = Refine(
        Base("list"),
        Lam("l", Base("list"), Eq(App(Const("length"), Var("l")), Var("n"), Base("nat"))),
    )
    assert print_type(t) == "list | (\\l:list. length l =[nat] n)"
    # without the annotation the equality prints bare
    t2 = Refine(
        Base("list"),
        Lam("l", Base("list"), Eq(App(Const("length"), Var("l")), Var("n"), None)),
    )
    assert print_type(t2) == "list | (\\l:list. length l = n)"


def test_print_quotient():
    assert print_type(Quotient(Base("a"), Var("r"))) == "a / r"


def test_print_dependent_pi():
    ty = parse_type_string(
        "(m:nat) -> (n:nat) -> llist m -> llist n -> llist (plus m n)"
    )
    assert print_type(ty) == "(m:nat) -> (n:nat) -> llist m -> llist n -> llist (plus m n)"
    assert isinstance(ty, Pi) and ty.var == "m"


def test_refinement_binds_tighter_than_arrow():
    ty = parse_type_string("a -> b | p")
    assert isinstance(ty, Pi)
    assert isinstance(ty.codomain, Refine)
    ty2 = parse_type_string("(a -> b) | p")
    assert isinstance(ty2, Refine)
    assert isinstance(ty2.base, Pi)


def test_operator_precedence():
    t = parse_term_string("x = y \\/ p x /\\ q y => r")
    # (((x = y) \/ (p x /\ q y)) => r)
    from dholc.syntax import Implies, Or, And

    assert isinstance(t, Implies)
    assert isinstance(t.hyp, Or)
    assert isinstance(t.hyp.rhs, And)


def test_quantifier_extends_right():
    t = parse_term_string("forall x:a. p x => q x")
    from dholc.syntax import Forall, Implies

    assert isinstance(t, Forall)
    assert isinstance(t.body, Implies)


def test_parse_error_has_span_and_expected():
    with pytest.raises(ParseError) as e:
        parse_theory("const zero nat")
    assert e.value.span is not None
    assert ":" in e.value.expected


def test_parse_error_bad_char():
    with pytest.raises(ParseError):
        parse_theory("const zero : nat $")


def test_roundtrip_corpus():
    for name in ("lists.dhol", "llist.dhol", "sets.dhol", "refdom.dhol",
                 "settheory.dhol", "lconc_assoc.dhol"):
        with open(corpus_path(name)) as fh:
            text = fh.read()
        decls, conjectures = parse_theory(text, name)
        printed = print_theory(decls, conjectures)
        decls2, conjectures2 = parse_theory(printed, name + "#2")
        assert len(decls) == len(decls2)
        for a, b in zip(decls, decls2):
            assert type(a) is type(b)
            for field in ("name",):
                assert getattr(a, field) == getattr(b, field)
        for a, b in zip(conjectures, conjectures2):
            assert alpha_eq(a.formula, b.formula)


def test_roundtrip_random_terms():
    rng = random.Random(23)
    for _ in range(500):
        t = random_term(rng, 4)
        printed = print_term(t)
        back = parse_term_string(printed)
        assert alpha_eq(back, t), printed


def test_roundtrip_random_types():
    rng = random.Random(29)
    for _ in range(200):
        ty = random_type(rng, 3)
        printed = print_type(ty)
        back = parse_type_string(printed)
        assert alpha_eq(back, ty), printed


def test_spans_nest():
    text = "axiom a_ax : forall x:nat. p x => q x\n"
    decls, _ = parse_theory(text, "spans.dhol")
    ax = decls[0]
    f = ax.formula

    def walk(t, outer):
        sp = getattr(t, "span", None)
        if sp is not None and outer is not None:
            assert (sp.line, sp.col) >= (outer.line, outer.col)
            assert (sp.end_line, sp.end_col) <= (outer.end_line, outer.end_col)
        import dataclasses

        if dataclasses.is_dataclass(t):
            for fld in dataclasses.fields(t):
                v = getattr(t, fld.name)
                if dataclasses.is_dataclass(v) and fld.name != "span":
                    walk(v, sp or outer)

    walk(f, None)
