import pytest

from dholc.driver import Options, PipelineError, elaborate_file
from dholc.kernel import (
    Checker, KernelError, Rejected, check_theory_into, close_obligation,
    simplify_obligation,
)
from dholc.parser import parse_term_string, parse_theory, parse_type_string
from dholc.syntax import (
    Assumption, Axiom, Base, BOOL, ConstDecl, Const, Context, EMPTY_CONTEXT,
    Eq, App, Lam, Pi, TypeSym, Var, VarDecl, alpha_beta_eq, alpha_eq,
    expand_definitions, expand_sugar,
)

from conftest import corpus_path, goal_eq


def checked(text: str, qcod: bool = True):
    decls, conjectures = parse_theory(text)
    units, conjectures = expand_definitions(decls, conjectures)
    from dholc.driver import _expand_all

    units, conjectures = _expand_all(units, conjectures)
    chk = Checker(qcod=qcod)
    result = check_theory_into(chk, units)
    return chk, result, conjectures


LISTS = open(corpus_path("lists.dhol")).read()


def test_lists_theory_accepted_no_obligations():
    chk, result, _ = checked(LISTS)
    assert result.accepted
    assert result.obligations == []


def test_axiom_must_be_boolean():
    chk, result, _ = checked("type nat  const zero : nat  axiom bad : zero")
    assert not result.accepted
    assert isinstance(result.status, Rejected)


def test_duplicate_names_rejected():
    _, result, _ = checked("type nat  const nat : nat")
    assert not result.accepted


def test_unbound_symbol_rejected():
    _, result, _ = checked("const c : nosuch")
    assert not result.accepted


def test_arity_mismatch_rejected():
    _, result, _ = checked("type nat\ntype llist (n : nat)\nconst c : llist")
    assert not result.accepted


def test_set_definition_emits_equivalence_obligations():
    run = elaborate_file(corpus_path("sets.dhol"), Options())
    rules = [ob.rule for ob in run.check.obligations]
    assert rules[:3] == ["Qtype-refl", "Qtype-sym", "Qtype-trans"]
    # reusing list concatenation at the quotient type adds one
    # compatibility obligation
    assert rules[3:] == ["psubI"]


def test_check_type_simple():
    chk, result, _ = checked(LISTS)
    assert chk.check_type(EMPTY_CONTEXT, BOOL) == BOOL
    before = len(chk.obligations)
    chk.check_type(EMPTY_CONTEXT, Base("llist", (Const("zero"),)))
    assert len(chk.obligations) == before


def test_infer_const_and_application():
    chk, _, _ = checked(LISTS)
    from dholc.syntax import resolve_constants

    _, ty = chk.infer(EMPTY_CONTEXT, Const("cons"))
    assert alpha_eq(ty, parse_type_string("obj -> list -> list"))
    ctx = Context((VarDecl("n", Base("nat")),))
    _, ty2 = chk.infer(ctx, App(Const("lcons"), Var("n")))
    expected = resolve_constants(
        parse_type_string("obj -> llist n -> llist (succ n)"), chk.sig.consts
    )
    assert alpha_eq(ty2, expected)


def test_infer_unbound():
    chk, _, _ = checked(LISTS)
    with pytest.raises(KernelError):
        chk.infer(EMPTY_CONTEXT, Var("nope"))


def test_application_of_non_function_rejected():
    chk, _, _ = checked(LISTS)
    with pytest.raises(KernelError):
        chk.infer(EMPTY_CONTEXT, App(Const("zero"), Const("zero")))


def test_check_against_refinement_emits_predicate():
    chk, _, _ = checked(open(corpus_path("llist.dhol")).read())
    # the definition checks already ran; nil against llist zero is the
    # first obligation
    ob = chk.obligations[0]
    assert ob.rule == "psubI"
    assert goal_eq(chk, close_obligation(ob), "length nil =[nat] zero")


def test_check_against_same_type_no_obligations():
    chk, _, _ = checked(LISTS)
    before = len(chk.obligations)
    chk.check_against(EMPTY_CONTEXT, Const("nil"), Base("list"))
    assert len(chk.obligations) == before


def test_type_equal_syntactic():
    chk, _, _ = checked(LISTS)
    ctx = Context((VarDecl("m", Base("nat")), VarDecl("n", Base("nat"))))
    plus_mn = parse_term_string("plus m n")
    t = Base("llist", (expand_sugar(plus_mn),))
    before = len(chk.obligations)
    chk.type_equal(ctx, t, t)
    assert len(chk.obligations) == before


def test_type_equal_base_args_emit_equality():
    chk, _, _ = checked(LISTS)
    ctx = Context(
        (VarDecl("m", Base("nat")), VarDecl("n", Base("nat")), VarDecl("k", Base("nat")))
    )
    a = parse_type_string("llist (plus m (plus n k))")
    b = parse_type_string("llist (plus (plus m n) k)")
    a = chk.check_type(ctx, expand_sugar(a))
    b = chk.check_type(ctx, expand_sugar(b))
    before = len(chk.obligations)
    chk.type_equal(ctx, a, b)
    new = chk.obligations[before:]
    assert len(new) == 1
    assert goal_eq(
        chk,
        close_obligation(new[0]),
        "forall m:nat. forall n:nat. forall k:nat. "
        "plus m (plus n k) =[nat] plus (plus m n) k",
    )


def test_type_equal_refinements_both_directions():
    chk, _, _ = checked("type a  const p : a -> bool  const q : a -> bool")
    a = chk.check_type(EMPTY_CONTEXT, parse_type_string("a | p"))
    b = chk.check_type(EMPTY_CONTEXT, parse_type_string("a | q"))
    before = len(chk.obligations)
    chk.type_equal(EMPTY_CONTEXT, a, b)
    new = chk.obligations[before:]
    assert len(new) == 2
    assert goal_eq(chk, close_obligation(new[0]), "forall x:a. p x => q x")
    assert goal_eq(chk, close_obligation(new[1]), "forall x:a. q x => p x")


def test_type_equal_incompatible_rejected():
    chk, _, _ = checked("type a  type b")
    with pytest.raises(KernelError):
        chk.type_equal(EMPTY_CONTEXT, Base("a"), Base("b"))


def test_dependent_implication_typing():
    # the conclusion may need the hypothesis to be well-typed; here it
    # only checks that the assumption lands in emitted contexts
    chk, _, _ = checked("type a  const p : a -> bool  const c : a | p")
    f = parse_term_string("p c")
    chk.check_against(EMPTY_CONTEXT, expand_sugar(f), BOOL)


def test_quot_elim_emits_invariance():
    text = (
        "type obj\n"
        "type list\n"
        "const conc : list -> list -> list\n"
        "const contains : list -> obj -> bool\n"
        "type set := list / (\\l:list. \\m:list. forall x:obj. contains l x = contains m x)\n"
        "def lift : set -> list -> list := \\u:set. use u as x : set return list -> list in conc x\n"
    )
    chk, result, _ = checked(text)
    assert result.accepted
    inv = [ob for ob in chk.obligations if ob.rule == "quotE-invariance"]
    assert len(inv) == 1
    goal = inv[0].goal
    assert isinstance(goal, Eq)
    assert alpha_eq(goal.at, parse_type_string("list -> list"))


def test_use_requires_quotient_carrier():
    chk, result, _ = checked(
        "type a\nconst c : a\ndef d : a := use c as x : a return a in x\n"
    )
    assert not result.accepted


def test_simplify_reflexivity():
    chk, _, _ = checked(LISTS)
    ctx = Context((VarDecl("m", Base("nat")), VarDecl("n", Base("nat"))))
    goal = expand_sugar(parse_term_string("plus m n =[nat] plus m n"))
    chk.emit(ctx, goal, "congBase'", None)
    assert simplify_obligation(chk.obligations[-1]) == "reflexivity"


def test_simplify_axiom_verbatim():
    run = elaborate_file(corpus_path("llist.dhol"), Options())
    ob = run.check.obligations[0]
    reason = simplify_obligation(ob, run.checker.sig.axioms)
    assert reason == "axiom length_nil"


def test_simplify_remaining():
    chk, _, _ = checked(LISTS)
    ctx = Context(
        (VarDecl("m", Base("nat")), VarDecl("n", Base("nat")), VarDecl("k", Base("nat")))
    )
    goal = expand_sugar(
        parse_term_string("plus m (plus n k) =[nat] plus (plus m n) k")
    )
    chk.emit(ctx, goal, "congBase'", None)
    assert simplify_obligation(chk.obligations[-1], chk.sig.axioms) is None


def test_simplify_assumption_lookup():
    chk, _, _ = checked(LISTS)
    f = expand_sugar(parse_term_string("plus m n =[nat] zero"))
    ctx = Context(
        (VarDecl("m", Base("nat")), VarDecl("n", Base("nat")), Assumption("h", f))
    )
    chk.emit(ctx, f, "test", None)
    assert simplify_obligation(chk.obligations[-1]) == "assumption h"


def test_determinism():
    runs = []
    for _ in range(2):
        run = elaborate_file(corpus_path("settheory.dhol"), Options())
        runs.append(
            [(ob.id, ob.rule, ob.goal) for ob in run.check.obligations]
        )
    assert len(runs[0]) == len(runs[1])
    for (i1, r1, g1), (i2, r2, g2) in zip(*runs):
        assert i1 == i2 and r1 == r2
        assert g1 == g2


def test_obligation_goals_typecheck_as_bool():
    # self-application: every emitted goal checks against bool in its
    # own context
    for name in ("llist.dhol", "sets.dhol", "settheory.dhol", "lconc_assoc.dhol"):
        run = elaborate_file(corpus_path(name), Options())
        chk = run.checker
        for ob in run.check.obligations:
            probe = Checker()
            probe.sig = chk.sig
            probe.check_against(ob.context, ob.goal, BOOL)


def test_conjecture_against_bool():
    run = elaborate_file(corpus_path("lconc_assoc.dhol"), Options())
    assert len(run.elaborated_conjectures) == 1
    assert len(run.check.obligations) == 1
