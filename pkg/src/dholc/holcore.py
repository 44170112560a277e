"""Simply typed higher-order target language and TPTP THF emission.

The image of the translation is classical simply typed HOL. Connectives
exist as native nodes so the emitter can use native THF syntax; with
raw=True the emitter instead expands every connective to its defining
equality form, leaving only application, lambda, equality and
implication.

Emission is deterministic byte for byte for a fixed theory, and the
module includes a reader for exactly the emitted THF subset so every
file can be reparsed and compared alpha-equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class HBool:
    pass


@dataclass(frozen=True)
class HBase:
    name: str


@dataclass(frozen=True)
class HArrow:
    dom: "HolType"
    cod: "HolType"


HolType = Union[HBool, HBase, HArrow]
HBOOL = HBool()


def harrows(*ts: HolType) -> HolType:
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = HArrow(t, out)
    return out


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class HConst:
    name: str


@dataclass(frozen=True)
class HVar:
    name: str


@dataclass(frozen=True)
class HLam:
    var: str
    ty: HolType
    body: "HolTerm"


@dataclass(frozen=True)
class HApp:
    fn: "HolTerm"
    arg: "HolTerm"


@dataclass(frozen=True)
class HEq:
    lhs: "HolTerm"
    rhs: "HolTerm"
    at: Optional[HolType] = field(default=None, compare=False)


@dataclass(frozen=True)
class HImplies:
    hyp: "HolTerm"
    concl: "HolTerm"


@dataclass(frozen=True)
class HTrue:
    pass


@dataclass(frozen=True)
class HFalse:
    pass


@dataclass(frozen=True)
class HNot:
    arg: "HolTerm"


@dataclass(frozen=True)
class HAnd:
    lhs: "HolTerm"
    rhs: "HolTerm"


@dataclass(frozen=True)
class HOr:
    lhs: "HolTerm"
    rhs: "HolTerm"


@dataclass(frozen=True)
class HIff:
    lhs: "HolTerm"
    rhs: "HolTerm"


@dataclass(frozen=True)
class HForall:
    var: str
    ty: HolType
    body: "HolTerm"


@dataclass(frozen=True)
class HExists:
    var: str
    ty: HolType
    body: "HolTerm"


HolTerm = Union[
    HConst, HVar, HLam, HApp, HEq, HImplies,
    HTrue, HFalse, HNot, HAnd, HOr, HIff, HForall, HExists,
]


def happs(fn: HolTerm, *args: HolTerm) -> HolTerm:
    for a in args:
        fn = HApp(fn, a)
    return fn


def hand(*conjuncts: HolTerm) -> HolTerm:
    """Conjunction with syntactic deduplication of repeated conjuncts."""
    out: list[HolTerm] = []
    for c in conjuncts:
        if isinstance(c, HTrue):
            continue
        if c not in out:
            out.append(c)
    if not out:
        return HTrue()
    acc = out[0]
    for c in out[1:]:
        acc = HAnd(acc, c)
    return acc


@dataclass
class HolTheory:
    type_syms: list[str] = field(default_factory=list)
    consts: list[tuple[str, HolType]] = field(default_factory=list)
    axioms: list[tuple[str, HolTerm]] = field(default_factory=list)

    def const_type(self, name: str) -> Optional[HolType]:
        for n, t in self.consts:
            if n == name:
                return t
        return None


@dataclass(frozen=True)
class HolConjecture:
    name: str
    formula: HolTerm
    source_obligation: str = ""


# ---------------------------------------------------------------------------
# Substitution / alpha equality / free variables


def hol_free_vars(t: HolTerm) -> frozenset[str]:
    match t:
        case HConst(_) | HTrue() | HFalse():
            return frozenset()
        case HVar(n):
            return frozenset({n})
        case HLam(v, _, b) | HForall(v, _, b) | HExists(v, _, b):
            return hol_free_vars(b) - {v}
        case HApp(f, a):
            return hol_free_vars(f) | hol_free_vars(a)
        case HEq(l, r) | HImplies(l, r) | HAnd(l, r) | HOr(l, r) | HIff(l, r):
            return hol_free_vars(l) | hol_free_vars(r)
    raise TypeError(t)


def hol_subst(t: HolTerm, var: str, value: HolTerm) -> HolTerm:
    fv = hol_free_vars(value)

    def freshen(v: str, body: HolTerm) -> tuple[str, HolTerm]:
        used = fv | hol_free_vars(body) | {var}
        root = v.rstrip("0123456789") or v
        i = 1
        v2 = f"{root}{i}"
        while v2 in used:
            i += 1
            v2 = f"{root}{i}"
        return v2, hol_subst(body, v, HVar(v2))

    def go(t: HolTerm) -> HolTerm:
        match t:
            case HConst(_) | HTrue() | HFalse():
                return t
            case HVar(n):
                return value if n == var else t
            case HLam(v, ty, b) | HForall(v, ty, b) | HExists(v, ty, b):
                cls = type(t)
                if v == var:
                    return t
                if v in fv and var in hol_free_vars(b):
                    v, b = freshen(v, b)
                return cls(v, ty, go(b))
            case HApp(f, a):
                return HApp(go(f), go(a))
            case HEq(l, r, at):
                return HEq(go(l), go(r), at)
            case HImplies(l, r):
                return HImplies(go(l), go(r))
            case HAnd(l, r):
                return HAnd(go(l), go(r))
            case HOr(l, r):
                return HOr(go(l), go(r))
            case HIff(l, r):
                return HIff(go(l), go(r))
        raise TypeError(t)

    return go(t)


def hol_alpha_eq(a: HolTerm, b: HolTerm) -> bool:
    """Alpha equality; Eq annotations are ignored (they are derivable)."""

    def go(a, b, ea, eb) -> bool:
        if type(a) is not type(b):
            return False
        match a, b:
            case HConst(n1), HConst(n2):
                return n1 == n2
            case HVar(n1), HVar(n2):
                if n1 in ea or n2 in eb:
                    return n1 in ea and n2 in eb and ea[n1] == eb[n2]
                return n1 == n2
            case (HLam(v1, t1, b1), HLam(v2, t2, b2)) | (
                HForall(v1, t1, b1), HForall(v2, t2, b2)
            ) | (HExists(v1, t1, b1), HExists(v2, t2, b2)):
                if t1 != t2:
                    return False
                m = len(ea) + len(eb)
                return go(b1, b2, {**ea, v1: m}, {**eb, v2: m})
            case HApp(f1, a1), HApp(f2, a2):
                return go(f1, f2, ea, eb) and go(a1, a2, ea, eb)
            case (HEq(l1, r1), HEq(l2, r2)) | (HImplies(l1, r1), HImplies(l2, r2)) | (
                HAnd(l1, r1), HAnd(l2, r2)
            ) | (HOr(l1, r1), HOr(l2, r2)) | (HIff(l1, r1), HIff(l2, r2)):
                return go(l1, l2, ea, eb) and go(r1, r2, ea, eb)
            case HTrue(), HTrue():
                return True
            case HFalse(), HFalse():
                return True
        return False

    return go(a, b, {}, {})


# ---------------------------------------------------------------------------
# Simple type inference


class HolTypeError(Exception):
    pass


def hol_infer_type(
    theory: HolTheory, env: dict[str, HolType], t: HolTerm
) -> HolType:
    match t:
        case HConst(n):
            ty = theory.const_type(n)
            if ty is None:
                raise HolTypeError(f"unknown constant {n!r}")
            return ty
        case HVar(n):
            if n not in env:
                raise HolTypeError(f"unbound variable {n!r}")
            return env[n]
        case HLam(v, ty, b):
            return HArrow(ty, hol_infer_type(theory, {**env, v: ty}, b))
        case HApp(f, a):
            fty = hol_infer_type(theory, env, f)
            aty = hol_infer_type(theory, env, a)
            if not isinstance(fty, HArrow):
                raise HolTypeError(f"applied non-function in {t!r}")
            if fty.dom != aty:
                raise HolTypeError(
                    f"argument type mismatch: expected {fty.dom}, got {aty}"
                )
            return fty.cod
        case HEq(l, r, at):
            lt = hol_infer_type(theory, env, l)
            rt = hol_infer_type(theory, env, r)
            if lt != rt:
                raise HolTypeError(f"equality at two types: {lt} vs {rt}")
            if at is not None and at != lt:
                raise HolTypeError(f"equality annotation {at} does not match {lt}")
            return HBOOL
        case HImplies(l, r) | HAnd(l, r) | HOr(l, r) | HIff(l, r):
            for side in (l, r):
                if hol_infer_type(theory, env, side) != HBOOL:
                    raise HolTypeError(f"connective on non-boolean in {t!r}")
            return HBOOL
        case HNot(a):
            if hol_infer_type(theory, env, a) != HBOOL:
                raise HolTypeError(f"negation of non-boolean {a!r}")
            return HBOOL
        case HTrue() | HFalse():
            return HBOOL
        case HForall(v, ty, b) | HExists(v, ty, b):
            if hol_infer_type(theory, {**env, v: ty}, b) != HBOOL:
                raise HolTypeError(f"quantifier body not boolean in {t!r}")
            return HBOOL
    raise HolTypeError(f"malformed HOL term {t!r}")


def check_hol_theory(theory: HolTheory) -> None:
    """Well-formedness of the whole image: every axiom is boolean."""
    declared = set(theory.type_syms)

    def types_ok(ty: HolType) -> bool:
        match ty:
            case HBool():
                return True
            case HBase(n):
                return n in declared
            case HArrow(d, c):
                return types_ok(d) and types_ok(c)
        return False

    for n, ty in theory.consts:
        if not types_ok(ty):
            raise HolTypeError(f"constant {n!r} uses an undeclared type")
    for n, f in theory.axioms:
        if hol_infer_type(theory, {}, f) != HBOOL:
            raise HolTypeError(f"axiom {n!r} is not boolean")


# ---------------------------------------------------------------------------
# Raw-core expansion (connectives down to equality and implication)


def expand_hol_sugar(t: HolTerm) -> HolTerm:
    def true_core() -> HolTerm:
        idb = HLam("x", HBOOL, HVar("x"))
        return HEq(idb, idb, HArrow(HBOOL, HBOOL))

    def false_core() -> HolTerm:
        return HEq(
            HLam("x", HBOOL, HVar("x")),
            HLam("x", HBOOL, true_core()),
            HArrow(HBOOL, HBOOL),
        )

    def go(t: HolTerm) -> HolTerm:
        match t:
            case HConst(_) | HVar(_):
                return t
            case HLam(v, ty, b):
                return HLam(v, ty, go(b))
            case HApp(f, a):
                return HApp(go(f), go(a))
            case HEq(l, r, at):
                return HEq(go(l), go(r), at)
            case HImplies(l, r):
                return HImplies(go(l), go(r))
            case HTrue():
                return true_core()
            case HFalse():
                return false_core()
            case HNot(a):
                return HImplies(go(a), false_core())
            case HAnd(l, r):
                return go(HNot(HImplies(l, HNot(r))))
            case HOr(l, r):
                return go(HImplies(HNot(l), r))
            case HIff(l, r):
                return HEq(go(l), go(r), HBOOL)
            case HForall(v, ty, b):
                return HEq(
                    HLam(v, ty, go(b)), HLam(v, ty, true_core()), HArrow(ty, HBOOL)
                )
            case HExists(v, ty, b):
                return go(HNot(HForall(v, ty, HNot(b))))
        raise TypeError(t)

    return go(t)


# ---------------------------------------------------------------------------
# THF emission


_ATOM_RE = re.compile(r"^[a-z][a-zA-Z0-9_]*$")


def mangle_names(names: list[str]) -> dict[str, str]:
    """Deterministic, collision-checked THF atom names."""
    out: dict[str, str] = {}
    used: set[str] = set()
    for name in names:
        m = re.sub(r"[^a-zA-Z0-9_]", "_", name).lower()
        if not m or not m[0].isalpha():
            m = "x" + m
        cand = m
        i = 1
        while cand in used:
            i += 1
            cand = f"{m}{i}"
        out[name] = cand
        used.add(cand)
    return out


def _emit_type(ty: HolType, names: dict[str, str]) -> str:
    match ty:
        case HBool():
            return "$o"
        case HBase(n):
            return names.get(n, n)
        case HArrow(d, c):
            return f"({_emit_type(d, names)} > {_emit_type(c, names)})"
    raise TypeError(ty)


def _var_name(base: str, used: set[str]) -> str:
    v = re.sub(r"[^a-zA-Z0-9_]", "_", base)
    v = v[0].upper() + v[1:] if v else "X"
    if not v[0].isalpha():
        v = "X" + v
    cand = v
    i = 1
    while cand in used:
        i += 1
        cand = f"{v}{i}"
    return cand


def _emit_term(t: HolTerm, names: dict[str, str], env: dict[str, str], used: set[str]) -> str:
    match t:
        case HConst(n):
            return names.get(n, n)
        case HVar(n):
            return env[n]
        case HLam(v, ty, b) | HForall(v, ty, b) | HExists(v, ty, b):
            binder = {"HLam": "^", "HForall": "!", "HExists": "?"}[type(t).__name__]
            v2 = _var_name(v, used)
            body = _emit_term(b, names, {**env, v: v2}, used | {v2})
            return f"({binder} [{v2}:{_emit_type(ty, names)}]: {body})"
        case HApp(f, a):
            return f"({_emit_term(f, names, env, used)} @ {_emit_term(a, names, env, used)})"
        case HEq(l, r, _):
            return f"({_emit_term(l, names, env, used)} = {_emit_term(r, names, env, used)})"
        case HImplies(l, r):
            return f"({_emit_term(l, names, env, used)} => {_emit_term(r, names, env, used)})"
        case HAnd(l, r):
            return f"({_emit_term(l, names, env, used)} & {_emit_term(r, names, env, used)})"
        case HOr(l, r):
            return f"({_emit_term(l, names, env, used)} | {_emit_term(r, names, env, used)})"
        case HIff(l, r):
            return f"({_emit_term(l, names, env, used)} <=> {_emit_term(r, names, env, used)})"
        case HNot(a):
            return f"(~ {_emit_term(a, names, env, used)})"
        case HTrue():
            return "$true"
        case HFalse():
            return "$false"
    raise TypeError(t)


def emit_tptp(theory: HolTheory, conj: Optional[HolConjecture], raw: bool = False) -> str:
    """Render theory (+ optional conjecture) as a THF0 problem file."""
    names = mangle_names(
        theory.type_syms
        + [n for n, _ in theory.consts]
        + [n for n, _ in theory.axioms]
        + ([conj.name] if conj else [])
    )
    lines = []
    for ts in theory.type_syms:
        lines.append(f"thf({names[ts]}_type, type, {names[ts]}: $tType).")
    for cn, ty in theory.consts:
        lines.append(f"thf({names[cn]}_type, type, {names[cn]}: {_emit_type(ty, names)}).")
    for an, f in theory.axioms:
        f2 = expand_hol_sugar(f) if raw else f
        lines.append(f"thf({names[an]}, axiom, {_emit_term(f2, names, {}, set())}).")
    if conj is not None:
        f2 = expand_hol_sugar(conj.formula) if raw else conj.formula
        lines.append(
            f"thf({names[conj.name]}, conjecture, {_emit_term(f2, names, {}, set())})."
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Reader for the emitted subset (round-trip checking)


class ThfParseError(Exception):
    pass


_THF_TOKEN = re.compile(
    r"\s*(thf|\$tType|\$true|\$false|\$o|<=>|=>|[=&|~^!?@:,.()\[\]>]|[A-Za-z][A-Za-z0-9_]*)"
)


def _thf_tokens(text: str) -> list[str]:
    toks = []
    pos = 0
    text = re.sub(r"%[^\n]*", "", text)
    while pos < len(text):
        m = _THF_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ThfParseError(f"bad THF input at {text[pos:pos+20]!r}")
            break
        toks.append(m.group(1))
        pos = m.end()
    return toks


@dataclass
class ThfProblem:
    type_syms: list[str]
    consts: list[tuple[str, HolType]]
    axioms: list[tuple[str, HolTerm]]
    conjectures: list[tuple[str, HolTerm]]


class _ThfReader:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i] if self.i < len(self.toks) else ""

    def next(self) -> str:
        t = self.peek()
        self.i += 1
        return t

    def expect(self, tok: str) -> None:
        t = self.next()
        if t != tok:
            raise ThfParseError(f"expected {tok!r}, found {t!r}")

    def parse_type(self) -> HolType:
        left = self.parse_type_atom()
        if self.peek() == ">":
            self.next()
            return HArrow(left, self.parse_type())
        return left

    def parse_type_atom(self) -> HolType:
        t = self.next()
        if t == "$o":
            return HBOOL
        if t == "(":
            inner = self.parse_type()
            self.expect(")")
            return inner
        if t and t[0].islower():
            return HBase(t)
        raise ThfParseError(f"bad type token {t!r}")

    def parse_term(self, env: set[str]) -> HolTerm:
        return self.parse_iff(env)

    def parse_iff(self, env) -> HolTerm:
        left = self.parse_implies(env)
        if self.peek() == "<=>":
            self.next()
            return HIff(left, self.parse_iff(env))
        return left

    def parse_implies(self, env) -> HolTerm:
        left = self.parse_or(env)
        if self.peek() == "=>":
            self.next()
            return HImplies(left, self.parse_implies(env))
        return left

    def parse_or(self, env) -> HolTerm:
        left = self.parse_and(env)
        while self.peek() == "|":
            self.next()
            left = HOr(left, self.parse_and(env))
        return left

    def parse_and(self, env) -> HolTerm:
        left = self.parse_eq(env)
        while self.peek() == "&":
            self.next()
            left = HAnd(left, self.parse_eq(env))
        return left

    def parse_eq(self, env) -> HolTerm:
        left = self.parse_app(env)
        if self.peek() == "=":
            self.next()
            return HEq(left, self.parse_app(env))
        return left

    def parse_app(self, env) -> HolTerm:
        t = self.parse_atom(env)
        while self.peek() == "@":
            self.next()
            t = HApp(t, self.parse_atom(env))
        return t

    def parse_atom(self, env) -> HolTerm:
        t = self.peek()
        if t == "(":
            self.next()
            inner = self.parse_term(env)
            self.expect(")")
            return inner
        if t == "~":
            self.next()
            return HNot(self.parse_atom(env))
        if t in ("^", "!", "?"):
            self.next()
            self.expect("[")
            var = self.next()
            self.expect(":")
            ty = self.parse_type()
            self.expect("]")
            self.expect(":")
            body = self.parse_atom(env | {var})
            cls = {"^": HLam, "!": HForall, "?": HExists}[t]
            return cls(var, ty, body)
        if t == "$true":
            self.next()
            return HTrue()
        if t == "$false":
            self.next()
            return HFalse()
        self.next()
        if t in env or (t and t[0].isupper()):
            return HVar(t)
        return HConst(t)


def read_tptp(text: str) -> ThfProblem:
    """Parse files produced by emit_tptp (not arbitrary TPTP)."""
    r = _ThfReader(_thf_tokens(text))
    out = ThfProblem([], [], [], [])
    while r.peek():
        r.expect("thf")
        r.expect("(")
        name = r.next()
        r.expect(",")
        role = r.next()
        r.expect(",")
        if role == "type":
            sym = r.next()
            r.expect(":")
            if r.peek() == "$tType":
                r.next()
                out.type_syms.append(sym)
            else:
                out.consts.append((sym, r.parse_type()))
        elif role == "axiom":
            out.axioms.append((name, r.parse_term(set())))
        elif role == "conjecture":
            out.conjectures.append((name, r.parse_term(set())))
        else:
            raise ThfParseError(f"unknown role {role!r}")
        r.expect(")")
        r.expect(".")
    return out
