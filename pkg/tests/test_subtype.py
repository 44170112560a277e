import pytest

from dholc.driver import Options, elaborate_file
from dholc.kernel import Checker, KernelError, check_theory_into, close_obligation
from dholc.parser import parse_type_string, print_type
from dholc.subtype import (
    NormalType, contains_refinement_or_quotient, normalize_type, subtype_check,
)
from dholc.syntax import (
    Base, BOOL, EMPTY_CONTEXT, Pi, Quotient, Refine, alpha_beta_eq, alpha_eq,
    expand_definitions, expand_sugar, resolve_constants,
)

from conftest import corpus_path, goal_eq


LAW_THEORY = """
type a
type b
const p : a -> bool
const q : b -> bool
const pp : a -> bool
const r : b -> b -> bool
const ra : a -> a -> bool
axiom r_refl : forall x:b. r x x
axiom r_sym : forall x:b. forall y:b. r x y => r y x
axiom r_trans : forall x:b. forall y:b. forall z:b. r x y => r y z => r x z
axiom ra_refl : forall x:a. ra x x
axiom ra_sym : forall x:a. forall y:a. ra x y => ra y x
axiom ra_trans : forall x:a. forall y:a. forall z:a. ra x y => ra y z => ra x z
"""


def law_checker(qcod: bool = True) -> Checker:
    from dholc.parser import parse_theory
    from dholc.driver import _expand_all

    decls, _ = parse_theory(LAW_THEORY)
    units, _ = expand_definitions(decls, [])
    units, _ = _expand_all(units, [])
    chk = Checker(qcod=qcod)
    result = check_theory_into(chk, units)
    assert result.accepted
    return chk


def norm(chk: Checker, text: str) -> NormalType:
    ty = resolve_constants(expand_sugar(parse_type_string(text)), chk.sig.consts)
    ty = chk.check_type(EMPTY_CONTEXT, ty)
    n, obs = normalize_type(chk, EMPTY_CONTEXT, ty)
    assert obs == []
    return n


def expect(chk: Checker, n: NormalType, text: str) -> None:
    expected = resolve_constants(expand_sugar(parse_type_string(text)), chk.sig.consts)
    assert alpha_beta_eq(n.as_type(), expected), print_type(n.as_type())


def test_law_repeated_refinement():
    chk = law_checker()
    expect(chk, norm(chk, "(a | p) | pp"), "a | (\\x:a. p x /\\ pp x)")


def test_law_repeated_quotient():
    chk = law_checker()
    # the outer relation subsumes the inner one
    n = norm(chk, "(a / ra) / (\\x:a. \\y:a. ra x y)")
    expect(chk, n, "a / (\\x:a. \\y:a. ra x y)")


def test_law_refinement_of_quotient_swaps():
    chk = law_checker()
    n = norm(chk, "(a / ra) | p")
    expect(chk, n, "(a | p) / ra")


def test_law_refined_codomain():
    chk = law_checker()
    n = norm(chk, "a -> (b | q)")
    expect(chk, n, "(a -> b) | (\\f:a -> b. forall x:a. q (f x))")


def test_law_quotient_codomain():
    chk = law_checker()
    n = norm(chk, "a -> (b / r)")
    expect(
        chk, n,
        "(a -> b) / (\\f:a -> b. \\g:a -> b. forall x:a. r (f x) (g x))",
    )


def test_law_quotient_codomain_disabled():
    chk = law_checker(qcod=False)
    n = norm(chk, "a -> (b / r)")
    assert n.rel is None and n.pred is None
    assert isinstance(n.core, Pi)
    assert isinstance(n.core.codomain, Quotient)


def test_law_quotient_domain():
    chk = law_checker()
    n = norm(chk, "(b / r) -> a")
    expect(
        chk, n,
        "(b -> a) | (\\f:b -> a. forall x:b. forall x1:b. r x x1 => f x =[a] f x1)",
    )


def test_law_refined_domain_fires_on_closed_codomain():
    chk = law_checker()
    n = norm(chk, "(a | p) -> b")
    expect(
        chk, n,
        "(a -> b) / (\\f:a -> b. \\g:a -> b. forall x:a. p x => f x =[b] g x)",
    )


def test_refined_domain_preserved_for_dependent_codomain():
    # inhabited refined-domain function type whose rewritten form would
    # have an empty core: the refined domain must stay in the core
    run = elaborate_file(corpus_path("refdom.dhol"), Options())
    chk = run.checker
    fty = chk.sig.consts["f"]
    n, _ = normalize_type(chk, EMPTY_CONTEXT, fty)
    assert n.pred is None and n.rel is None
    assert isinstance(n.core, Pi)
    assert isinstance(n.core.domain, Refine)
    assert alpha_eq(n.core, fty)


def test_normalize_idempotent():
    chk = law_checker()
    for text in (
        "(a | p) | pp", "a -> (b / r)", "(b / r) -> a", "(a | p) -> b",
        "a", "bool", "a -> b", "(a / ra) | p",
    ):
        n1 = norm(chk, text)
        n2, _ = normalize_type(chk, EMPTY_CONTEXT, n1.as_type())
        assert alpha_eq(n1.as_type(), n2.as_type())


def test_normalize_bool_trivial():
    chk = law_checker()
    n = norm(chk, "bool")
    assert n.core == BOOL and n.pred is None and n.rel is None


def test_normalize_drops_written_trivial_refinement():
    chk = law_checker()
    n = norm(chk, "a | (\\x:a. true)")
    assert n.pred is None and n.core == Base("a")


def test_subtype_refl_on_corpus_types():
    for name in ("lists.dhol", "llist.dhol", "sets.dhol", "settheory.dhol"):
        run = elaborate_file(corpus_path(name), Options())
        chk = run.checker
        for ty in chk.sig.consts.values():
            before = len(chk.obligations)
            subtype_check(chk, EMPTY_CONTEXT, ty, ty)
            assert len(chk.obligations) == before


def test_subtype_refinement_into_base():
    chk = law_checker()
    a = norm(chk, "a | p").as_type()
    before = len(chk.obligations)
    subtype_check(chk, EMPTY_CONTEXT, a, Base("a"))
    assert len(chk.obligations) == before


def test_subtype_base_into_quotient():
    chk = law_checker()
    q = norm(chk, "a / ra").as_type()
    before = len(chk.obligations)
    subtype_check(chk, EMPTY_CONTEXT, Base("a"), q)
    assert len(chk.obligations) == before


def test_subtype_refinement_weakening_obligation():
    chk = law_checker()
    a = norm(chk, "a | p").as_type()
    b = norm(chk, "a | pp").as_type()
    before = len(chk.obligations)
    subtype_check(chk, EMPTY_CONTEXT, a, b)
    new = chk.obligations[before:]
    assert len(new) == 1
    assert new[0].rule == "subtPsubCong"
    assert goal_eq(chk, close_obligation(new[0]), "forall x:a. p x => pp x")


def test_list_into_set():
    run = elaborate_file(corpus_path("sets.dhol"), Options())
    chk = run.checker
    set_ty = None
    from dholc.parser import parse_theory

    decls, _ = parse_theory(open(corpus_path("sets.dhol")).read())
    units, _ = expand_definitions(decls, [])
    from dholc.syntax import DefCheck, TypeDef

    for u in units:
        if isinstance(u, DefCheck) and isinstance(u.decl, TypeDef) and u.decl.name == "set":
            set_ty = expand_sugar(u.decl.rhs)
    set_ty = chk.check_type(EMPTY_CONTEXT, set_ty)
    before = len(chk.obligations)
    subtype_check(chk, EMPTY_CONTEXT, Base("list"), set_ty)
    assert len(chk.obligations) == before


def test_subtype_structural_mismatch_rejected():
    chk = law_checker()
    with pytest.raises(KernelError):
        subtype_check(chk, EMPTY_CONTEXT, norm(chk, "a | p").as_type(), BOOL)


def test_subtype_transitivity_discharged_by_oracle():
    # chain (a | both) -< (a | p) -< a on a finite theory; every emitted
    # obligation along the chain and for the composite is finite-valid
    from dholc import oracle
    from dholc.translate import translate_obligation, translate_theory

    text = (
        "type a\n"
        "const p : a -> bool\n"
        "const pp : a -> bool\n"
        "axiom pp_p : forall x:a. pp x => p x\n"
    )
    from dholc.parser import parse_theory
    from dholc.driver import _expand_all

    decls, _ = parse_theory(text)
    units, _ = expand_definitions(decls, [])
    units, _ = _expand_all(units, [])
    chk = Checker()
    assert check_theory_into(chk, units).accepted
    hol = translate_theory(chk.elaborated)
    A = chk.check_type(EMPTY_CONTEXT, expand_sugar(parse_type_string("a | (\\x:a. pp x)")))
    A = resolve_constants(A, chk.sig.consts)
    B = chk.check_type(EMPTY_CONTEXT, expand_sugar(parse_type_string("a | (\\x:a. p x)")))
    B = resolve_constants(B, chk.sig.consts)
    C = Base("a")
    for lhs, rhs in ((A, B), (B, C), (A, C)):
        before = len(chk.obligations)
        subtype_check(chk, EMPTY_CONTEXT, lhs, rhs)
        for ob in chk.obligations[before:]:
            verdict = oracle.check_valid_finite(
                hol, translate_obligation(ob).formula, 2
            )
            assert isinstance(verdict, oracle.Valid), (ob.rule, verdict)


def test_contains_refinement_or_quotient():
    assert contains_refinement_or_quotient(parse_type_string("a | p"))
    assert contains_refinement_or_quotient(parse_type_string("a -> (b / r)"))
    assert not contains_refinement_or_quotient(parse_type_string("a -> b -> bool"))
