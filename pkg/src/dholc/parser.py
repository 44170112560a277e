"""Parser and pretty-printer for the theory language.

Surface syntax (ASCII):

    type nat                     declared type symbol
    type llist (n : nat)         dependent type symbol
    type set := list / r         transparent type definition
    const zero : nat
    def lnil : llist zero := nil
    axiom len_nil : length nil = zero
    conjecture assoc : forall m:nat. ...

    (x:A) -> B    dependent function type      A -> B   shorthand
    A | p         refinement                   A / r    quotient
    \\x:A. t       lambda
    s = t         equality (annotation inferred)
    s =[A] t      annotated equality
    =>  /\\  \\/  ~  <=>        implication, conjunction, disjunction,
                               negation, equivalence
    forall x:A. F   exists x:A. F
    use s as x : A / r return B in t           quotient elimination
    # line comment

Precedence, tightest first: application, `=`, `~`, `/\\`, `\\/`, `=>`
(right associative), `<=>`, then binders extending maximally right.
Refinement and quotient bind tighter than `->`: `A -> B | p` is
`A -> (B | p)`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    And, App, Assumption, Axiom, Base, Bool, BOOL, Conjecture, Const, ConstDecl,
    Eq, Exists, FalseLit, Forall, Iff, Implies, Lam, Not, Or, Pi, QuotElim,
    Quotient, Refine, Span, Term, TermDef, TheoryDecl, TrueLit, TypeDef,
    TypeExpr, TypeSym, Var, free_vars, resugar, resugar_ty,
)

KEYWORDS = {
    "type", "const", "def", "axiom", "conjecture", "bool",
    "forall", "exists", "true", "false", "use", "as", "return", "in",
}

SYMBOLS = [
    ":=", "=>", "=[", "<=>", "->", "/\\", "\\/",
    "(", ")", "[", "]", ":", ".", ",", "=", "|", "/", "\\", "~",
]


class ParseError(Exception):
    def __init__(self, message: str, span: Optional[Span], expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.span = span
        self.expected = expected

    def __str__(self) -> str:
        loc = f"{self.span}: " if self.span else ""
        msg = super().__str__()
        if self.expected:
            msg += " (expected " + ", ".join(sorted(self.expected)) + ")"
        return loc + msg


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "keyword", symbol literal, "eof"
    text: str
    span: Span


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            span = Span(filename, start_line, start_col, line, start_col + (j - i))
            toks.append(Token("keyword" if word in KEYWORDS else "ident", word, span))
            col += j - i
            i = j
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                span = Span(filename, start_line, start_col, line, start_col + len(sym))
                toks.append(Token(sym, sym, span))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(
                f"unexpected character {c!r}",
                Span(filename, line, col, line, col + 1),
            )
    toks.append(Token("eof", "", Span(filename, line, col, line, col)))
    return toks


def _join(a: Span, b: Span) -> Span:
    return Span(a.file, a.line, a.col, b.end_line, b.end_col)


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"found {t.text or 'end of input'!r}", t.span, (kind,))
        return self.next()

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def at_keyword(self, word: str) -> bool:
        return self.peek().kind == "keyword" and self.peek().text == word

    def expect_keyword(self, word: str) -> Token:
        t = self.peek()
        if not self.at_keyword(word):
            raise ParseError(f"found {t.text or 'end of input'!r}", t.span, (word,))
        return self.next()

    # -- declarations ------------------------------------------------------

    def parse_file(self) -> tuple[list[TheoryDecl], list[Conjecture]]:
        decls: list[TheoryDecl] = []
        conjectures: list[Conjecture] = []
        while not self.at("eof"):
            t = self.peek()
            if self.at_keyword("type"):
                decls.append(self.parse_type_decl())
            elif self.at_keyword("const"):
                decls.append(self.parse_const_decl())
            elif self.at_keyword("def"):
                decls.append(self.parse_def_decl())
            elif self.at_keyword("axiom"):
                decls.append(self.parse_axiom())
            elif self.at_keyword("conjecture"):
                conjectures.append(self.parse_conjecture())
            else:
                raise ParseError(
                    f"found {t.text!r}",
                    t.span,
                    ("type", "const", "def", "axiom", "conjecture"),
                )
        return decls, conjectures

    def parse_telescope(self) -> tuple[tuple[str, TypeExpr], ...]:
        tele = []
        while self.at("(") and self.peek(1).kind == "ident" and self.peek(2).kind == ":":
            self.next()
            name = self.expect("ident").text
            self.expect(":")
            ty = self.parse_type()
            self.expect(")")
            tele.append((name, ty))
        return tuple(tele)

    def parse_type_decl(self) -> TheoryDecl:
        start = self.expect_keyword("type")
        name = self.expect("ident")
        tele = self.parse_telescope()
        if self.at(":="):
            self.next()
            rhs = self.parse_type()
            return TypeDef(name.text, tele, rhs, span=_join(start.span, self.peek(-1).span))
        return TypeSym(name.text, tele, span=_join(start.span, name.span))

    def parse_const_decl(self) -> ConstDecl:
        start = self.expect_keyword("const")
        name = self.expect("ident")
        self.expect(":")
        ty = self.parse_type()
        return ConstDecl(name.text, ty, span=_join(start.span, name.span))

    def parse_def_decl(self) -> TermDef:
        start = self.expect_keyword("def")
        name = self.expect("ident")
        self.expect(":")
        ty = self.parse_type()
        self.expect(":=")
        rhs = self.parse_term()
        return TermDef(name.text, ty, rhs, span=_join(start.span, name.span))

    def parse_axiom(self) -> Axiom:
        start = self.expect_keyword("axiom")
        name = self.expect("ident")
        self.expect(":")
        f = self.parse_term()
        return Axiom(name.text, f, span=_join(start.span, name.span))

    def parse_conjecture(self) -> Conjecture:
        start = self.expect_keyword("conjecture")
        name = self.expect("ident")
        self.expect(":")
        f = self.parse_term()
        return Conjecture(name.text, f, span=_join(start.span, name.span))

    # -- types --------------------------------------------------------------

    def parse_type(self) -> TypeExpr:
        # arrow level (loosest, right assoc); dependent binder on lookahead
        if self.at("(") and self.peek(1).kind == "ident" and self.peek(2).kind == ":":
            lp = self.next()
            name = self.expect("ident").text
            self.expect(":")
            dom = self.parse_type()
            self.expect(")")
            self.expect("->")
            cod = self.parse_type()
            return Pi(name, dom, cod, span=_join(lp.span, self.peek(-1).span))
        left = self.parse_type_decorated()
        if self.at("->"):
            self.next()
            cod = self.parse_type()
            return Pi("_", left, cod, span=_join(left.span or self.peek(-1).span, self.peek(-1).span))
        return left

    def parse_type_decorated(self) -> TypeExpr:
        t = self.parse_type_atom()
        while self.at("|") or self.at("/"):
            op = self.next()
            arg = self.parse_term_atom()
            if op.kind == "|":
                t = Refine(t, arg, span=_join(t.span or op.span, self.peek(-1).span))
            else:
                t = Quotient(t, arg, span=_join(t.span or op.span, self.peek(-1).span))
        return t

    def parse_type_atom(self) -> TypeExpr:
        t = self.peek()
        if self.at_keyword("bool"):
            self.next()
            return Bool(span=t.span)
        if t.kind == "ident":
            self.next()
            args = []
            while self._at_term_atom():
                args.append(self.parse_term_atom())
            return Base(t.text, tuple(args), span=t.span)
        if self.at("("):
            self.next()
            inner = self.parse_type()
            self.expect(")")
            return inner
        raise ParseError(f"found {t.text or 'end of input'!r}", t.span, ("type",))

    # -- terms ----------------------------------------------------------------

    def parse_term(self) -> Term:
        return self.parse_iff()

    def parse_binder(self) -> Optional[Term]:
        t = self.peek()
        if self.at("\\"):
            self.next()
            name = self.expect("ident").text
            self.expect(":")
            ty = self.parse_type()
            self.expect(".")
            body = self.parse_term()
            return Lam(name, ty, body, span=_join(t.span, self.peek(-1).span))
        if self.at_keyword("forall") or self.at_keyword("exists"):
            self.next()
            name = self.expect("ident").text
            self.expect(":")
            ty = self.parse_type()
            self.expect(".")
            body = self.parse_term()
            cls = Forall if t.text == "forall" else Exists
            return cls(name, ty, body, span=_join(t.span, self.peek(-1).span))
        if self.at_keyword("use"):
            self.next()
            scrut = self.parse_iff()
            self.expect_keyword("as")
            name = self.expect("ident").text
            self.expect(":")
            carrier = self.parse_type()
            self.expect_keyword("return")
            motive = self.parse_type()
            self.expect_keyword("in")
            body = self.parse_term()
            return QuotElim(scrut, name, carrier, body, motive, span=_join(t.span, self.peek(-1).span))
        return None

    def parse_iff(self) -> Term:
        b = self.parse_binder()
        if b is not None:
            return b
        left = self.parse_implies()
        if self.at("<=>"):
            op = self.next()
            right = self.parse_iff()
            return Iff(left, right, span=_join(left.span or op.span, self.peek(-1).span))
        return left

    def parse_implies(self) -> Term:
        b = self.parse_binder()
        if b is not None:
            return b
        left = self.parse_or()
        if self.at("=>"):
            op = self.next()
            right = self.parse_implies()
            return Implies(left, right, span=_join(left.span or op.span, self.peek(-1).span))
        return left

    def parse_or(self) -> Term:
        b = self.parse_binder()
        if b is not None:
            return b
        left = self.parse_and()
        while self.at("\\/"):
            self.next()
            right = self.parse_and_or_binder()
            left = Or(left, right, span=_join(left.span or self.peek(-1).span, self.peek(-1).span))
        return left

    def parse_and_or_binder(self) -> Term:
        b = self.parse_binder()
        return b if b is not None else self.parse_and()

    def parse_and(self) -> Term:
        left = self.parse_not()
        while self.at("/\\"):
            self.next()
            b = self.parse_binder()
            right = b if b is not None else self.parse_not()
            left = And(left, right, span=_join(left.span or self.peek(-1).span, self.peek(-1).span))
        return left

    def parse_not(self) -> Term:
        if self.at("~"):
            op = self.next()
            b = self.parse_binder()
            arg = b if b is not None else self.parse_not()
            return Not(arg, span=_join(op.span, self.peek(-1).span))
        return self.parse_eq()

    def parse_eq(self) -> Term:
        left = self.parse_app()
        if self.at("="):
            self.next()
            right = self.parse_app()
            return Eq(left, right, None, span=_join(left.span or self.peek(-1).span, self.peek(-1).span))
        if self.at("=["):
            self.next()
            at = self.parse_type()
            self.expect("]")
            right = self.parse_app()
            return Eq(left, right, at, span=_join(left.span or self.peek(-1).span, self.peek(-1).span))
        return left

    def parse_app(self) -> Term:
        fn = self.parse_term_atom()
        while self._at_term_atom():
            arg = self.parse_term_atom()
            fn = App(fn, arg, span=_join(fn.span or arg.span, arg.span))
        return fn

    def _at_term_atom(self) -> bool:
        t = self.peek()
        return t.kind in ("ident", "(") or (
            t.kind == "keyword" and t.text in ("true", "false")
        )

    def parse_term_atom(self) -> Term:
        t = self.peek()
        if t.kind == "ident":
            self.next()
            return Var(t.text, span=t.span)
        if self.at_keyword("true"):
            self.next()
            return TrueLit(span=t.span)
        if self.at_keyword("false"):
            self.next()
            return FalseLit(span=t.span)
        if self.at("("):
            self.next()
            inner = self.parse_term()
            self.expect(")")
            return inner
        raise ParseError(f"found {t.text or 'end of input'!r}", t.span, ("term",))


def parse_theory(text: str, filename: str = "<input>") -> tuple[list[TheoryDecl], list[Conjecture]]:
    """Parse a theory file into declarations and conjectures.

    Identifiers in term position parse as Var; name resolution against the
    signature (constants vs variables) happens in the kernel.
    """
    p = Parser(tokenize(text, filename))
    return p.parse_file()


def parse_term_string(text: str, filename: str = "<expr>") -> Term:
    p = Parser(tokenize(text, filename))
    t = p.parse_term()
    p.expect("eof")
    return t


def parse_type_string(text: str, filename: str = "<type>") -> TypeExpr:
    p = Parser(tokenize(text, filename))
    t = p.parse_type()
    p.expect("eof")
    return t


# ---------------------------------------------------------------------------
# Pretty printing

_PREC_IFF = 0
_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_NOT = 4
_PREC_EQ = 5
_PREC_APP = 6
_PREC_ATOM = 7


def _parens(s: str, needed: bool) -> str:
    return f"({s})" if needed else s


def print_term(t: Term, sugar: bool = True) -> str:
    """Render a term; parse(print_term(t)) is alpha-equal to t."""
    if sugar:
        t = resugar(t)
    return _pt(t, 0)


def _pt(t: Term, prec: int) -> str:
    match t:
        case Const(n) | Var(n):
            return n
        case TrueLit():
            return "true"
        case FalseLit():
            return "false"
        case Lam(v, annot, body):
            s = f"\\{v}:{print_type(annot, sugar=False)}. {_pt(body, 0)}"
            return _parens(s, prec > 0)
        case Forall(v, ty, body):
            s = f"forall {v}:{print_type(ty, sugar=False)}. {_pt(body, 0)}"
            return _parens(s, prec > 0)
        case Exists(v, ty, body):
            s = f"exists {v}:{print_type(ty, sugar=False)}. {_pt(body, 0)}"
            return _parens(s, prec > 0)
        case QuotElim(s0, v, carrier, body, motive):
            s = (
                f"use {_pt(s0, 0)} as {v}:{print_type(carrier, sugar=False)} "
                f"return {print_type(motive, sugar=False)} in {_pt(body, 0)}"
            )
            return _parens(s, prec > 0)
        case Iff(l, r):
            s = f"{_pt(l, _PREC_IFF + 1)} <=> {_pt(r, _PREC_IFF)}"
            return _parens(s, prec > _PREC_IFF)
        case Implies(h, c):
            s = f"{_pt(h, _PREC_IMPLIES + 1)} => {_pt(c, _PREC_IMPLIES)}"
            return _parens(s, prec > _PREC_IMPLIES)
        case Or(l, r):
            s = f"{_pt(l, _PREC_OR)} \\/ {_pt(r, _PREC_OR + 1)}"
            return _parens(s, prec > _PREC_OR)
        case And(l, r):
            s = f"{_pt(l, _PREC_AND)} /\\ {_pt(r, _PREC_AND + 1)}"
            return _parens(s, prec > _PREC_AND)
        case Not(a):
            return _parens(f"~{_pt(a, _PREC_NOT)}", prec > _PREC_NOT)
        case Eq(l, r, at):
            if at is None:
                s = f"{_pt(l, _PREC_EQ + 1)} = {_pt(r, _PREC_EQ + 1)}"
            else:
                s = f"{_pt(l, _PREC_EQ + 1)} =[{print_type(at, sugar=False)}] {_pt(r, _PREC_EQ + 1)}"
            return _parens(s, prec > _PREC_EQ)
        case App(f, a):
            s = f"{_pt(f, _PREC_APP)} {_pt(a, _PREC_ATOM)}"
            return _parens(s, prec > _PREC_APP)
    raise TypeError(f"print_term: unexpected node {t!r}")


def print_type(t: TypeExpr, sugar: bool = True) -> str:
    if sugar:
        t = resugar_ty(t)
    return _pty(t, 0)


# type precedence: 0 arrow, 1 decorated, 2 atom


def _pty(t: TypeExpr, prec: int) -> str:
    match t:
        case Bool():
            return "bool"
        case Base(n, args):
            if not args:
                return n
            s = n + "".join(f" {_pt(a, _PREC_ATOM)}" for a in args)
            return _parens(s, prec > 1)
        case Pi(v, dom, cod):
            if v in free_vars(cod):
                s = f"({v}:{_pty(dom, 0)}) -> {_pty(cod, 0)}"
            else:
                s = f"{_pty(dom, 1)} -> {_pty(cod, 0)}"
            return _parens(s, prec > 0)
        case Refine(b, p):
            s = f"{_pty(b, 1)} | {_pt(p, _PREC_ATOM)}"
            return _parens(s, prec > 1)
        case Quotient(b, r):
            s = f"{_pty(b, 1)} / {_pt(r, _PREC_ATOM)}"
            return _parens(s, prec > 1)
    raise TypeError(f"print_type: unexpected node {t!r}")


def print_theory(decls: list[TheoryDecl], conjectures: list[Conjecture] = ()) -> str:
    lines = []
    for d in decls:
        match d:
            case TypeSym(n, tele):
                tele_s = "".join(f" ({v} : {print_type(ty)})" for v, ty in tele)
                lines.append(f"type {n}{tele_s}")
            case ConstDecl(n, ty):
                lines.append(f"const {n} : {print_type(ty)}")
            case Axiom(n, f):
                lines.append(f"axiom {n} : {print_term(f)}")
            case TypeDef(n, tele, rhs):
                tele_s = "".join(f" ({v} : {print_type(ty)})" for v, ty in tele)
                lines.append(f"type {n}{tele_s} := {print_type(rhs)}")
            case TermDef(n, ty, rhs):
                lines.append(f"def {n} : {print_type(ty)} := {print_term(rhs)}")
    for c in conjectures:
        lines.append(f"conjecture {c.name} : {print_term(c.formula)}")
    return "\n".join(lines) + "\n"
