"""Finite-model evaluation kernel.

This module is deliberately written in plain procedural Python (no
match statements, no dataclass destructuring) so the identical source
also compiles as a Cython extension for speed; `dholc.oracle` picks the
compiled twin when it is importable.

Values are integers. A boolean is 0/1, an element of a base carrier of
size n is 0..n-1, and a function value over a domain of size d with
codomain size c is the mixed-radix code sum(table[i] * c**i); applying
it to argument i is digit extraction. Equality of encodings is
extensional equality of tables.

Formulas compile once per carrier-size assignment into nested closures
over (consts, env) where consts is the interpretation array and env the
binder slot array. Model search runs depth-first over interpretations
in lexicographic order, checking each axiom as soon as the constants it
mentions are all assigned.
"""

BACKEND = "python"

from ..holcore import (
    HApp, HAnd, HBase, HBool, HArrow, HConst, HEq, HExists, HFalse, HForall,
    HIff, HImplies, HLam, HNot, HOr, HTrue, HVar,
)


class EvalError(Exception):
    pass


class BudgetExceeded(Exception):
    pass


MAX_CARRIER = 10 ** 7


def type_size(ty, sizes, memo):
    key = ty
    got = memo.get(key)
    if got is not None:
        return got
    if isinstance(ty, HBool):
        n = 2
    elif isinstance(ty, HBase):
        n = sizes.get(ty.name)
        if n is None:
            raise EvalError(f"no carrier size for type symbol {ty.name!r}")
    elif isinstance(ty, HArrow):
        d = type_size(ty.dom, sizes, memo)
        c = type_size(ty.cod, sizes, memo)
        n = c ** d
        if n > MAX_CARRIER:
            raise EvalError("carrier too large")
    else:
        raise EvalError(f"unknown type {ty!r}")
    memo[key] = n
    return n


def compile_term(t, const_types, const_slots, sizes, memo, var_types, var_slots, depth):
    """Compile to (closure, type). Closures take (consts, env)."""
    cls = type(t)
    if cls is HConst:
        name = t.name
        if name not in const_slots:
            raise EvalError(f"unbound symbol {name!r}")
        slot = const_slots[name]
        ty = const_types[name]
        return (lambda C, E: C[slot]), ty
    if cls is HVar:
        name = t.name
        if name not in var_slots:
            raise EvalError(f"unbound symbol {name!r}")
        slot = var_slots[name]
        return (lambda C, E: E[slot]), var_types[name]
    if cls is HLam:
        v, vty, body = t.var, t.ty, t.body
        dom = type_size(vty, sizes, memo)
        slot = depth
        vt2 = dict(var_types)
        vt2[v] = vty
        vs2 = dict(var_slots)
        vs2[v] = slot
        cb, bty = compile_term(
            t.body, const_types, const_slots, sizes, memo, vt2, vs2, depth + 1
        )
        cod = type_size(bty, sizes, memo)

        def clo_lam(C, E):
            acc = 0
            mul = 1
            for i in range(dom):
                E[slot] = i
                acc += cb(C, E) * mul
                mul *= cod
            return acc

        return clo_lam, HArrow(vty, bty)
    if cls is HApp:
        cf, fty = compile_term(
            t.fn, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        ca, aty = compile_term(
            t.arg, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        if not isinstance(fty, HArrow):
            raise EvalError("application of a non-function")
        cod = type_size(fty.cod, sizes, memo)
        dom = type_size(fty.dom, sizes, memo)
        pows = [cod ** i for i in range(dom)]

        def clo_app(C, E):
            return (cf(C, E) // pows[ca(C, E)]) % cod

        return clo_app, fty.cod
    if cls is HEq:
        cl, _ = compile_term(
            t.lhs, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        cr, _ = compile_term(
            t.rhs, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        return (lambda C, E: 1 if cl(C, E) == cr(C, E) else 0), HBool()
    if cls is HImplies:
        cl, _ = compile_term(
            t.hyp, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        cr, _ = compile_term(
            t.concl, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        return (lambda C, E: 1 if cl(C, E) == 0 else cr(C, E)), HBool()
    if cls is HAnd:
        cl, _ = compile_term(
            t.lhs, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        cr, _ = compile_term(
            t.rhs, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        return (lambda C, E: 0 if cl(C, E) == 0 else cr(C, E)), HBool()
    if cls is HOr:
        cl, _ = compile_term(
            t.lhs, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        cr, _ = compile_term(
            t.rhs, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        return (lambda C, E: 1 if cl(C, E) == 1 else cr(C, E)), HBool()
    if cls is HIff:
        cl, _ = compile_term(
            t.lhs, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        cr, _ = compile_term(
            t.rhs, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        return (lambda C, E: 1 if cl(C, E) == cr(C, E) else 0), HBool()
    if cls is HNot:
        ca, _ = compile_term(
            t.arg, const_types, const_slots, sizes, memo, var_types, var_slots, depth
        )
        return (lambda C, E: 1 - ca(C, E)), HBool()
    if cls is HTrue:
        return (lambda C, E: 1), HBool()
    if cls is HFalse:
        return (lambda C, E: 0), HBool()
    if cls is HForall or cls is HExists:
        v, vty = t.var, t.ty
        dom = type_size(vty, sizes, memo)
        slot = depth
        vt2 = dict(var_types)
        vt2[v] = vty
        vs2 = dict(var_slots)
        vs2[v] = slot
        cb, _ = compile_term(
            t.body, const_types, const_slots, sizes, memo, vt2, vs2, depth + 1
        )
        if cls is HForall:

            def clo_all(C, E):
                for i in range(dom):
                    E[slot] = i
                    if cb(C, E) == 0:
                        return 0
                return 1

            return clo_all, HBool()

        def clo_ex(C, E):
            for i in range(dom):
                E[slot] = i
                if cb(C, E) == 1:
                    return 1
            return 0

        return clo_ex, HBool()
    raise EvalError(f"cannot compile {t!r}")


def term_depth(t):
    cls = type(t)
    if cls in (HLam, HForall, HExists):
        return 1 + term_depth(t.body)
    if cls is HApp:
        return max(term_depth(t.fn), term_depth(t.arg))
    if cls in (HEq, HAnd, HOr, HIff):
        return max(term_depth(t.lhs), term_depth(t.rhs))
    if cls is HImplies:
        return max(term_depth(t.hyp), term_depth(t.concl))
    if cls is HNot:
        return term_depth(t.arg)
    return 0


def term_consts(t, names):
    cls = type(t)
    if cls is HConst:
        return {t.name} & names
    if cls in (HLam, HForall, HExists):
        return term_consts(t.body, names)
    if cls is HApp:
        return term_consts(t.fn, names) | term_consts(t.arg, names)
    if cls in (HEq, HAnd, HOr, HIff):
        return term_consts(t.lhs, names) | term_consts(t.rhs, names)
    if cls is HImplies:
        return term_consts(t.hyp, names) | term_consts(t.concl, names)
    if cls is HNot:
        return term_consts(t.arg, names)
    return set()


def size_vectors(k, bound):
    """All size vectors in [1..bound]^k ordered by (max, lex), so the
    enumeration for a smaller bound is a prefix of any larger bound."""
    vecs = []
    if k == 0:
        return [()]

    def gen(prefix):
        if len(prefix) == k:
            vecs.append(tuple(prefix))
            return
        for s in range(1, bound + 1):
            gen(prefix + [s])

    gen([])
    vecs.sort(key=lambda v: (max(v), v))
    return vecs


def search(type_syms, const_names, const_types_list, axioms, formula, bound, budget):
    """Exhaustive model search.

    Returns ("valid", models_checked), ("counterexample", sizes, interps)
    or ("inconclusive", reason). Model enumeration order is fixed: size
    vectors by (max, lex); interpretation tuples lexicographic.
    """
    const_types = dict(zip(const_names, const_types_list))
    name_set = set(const_names)
    steps = 0
    models = 0
    for vec in size_vectors(len(type_syms), bound):
        sizes = dict(zip(type_syms, vec))
        memo = {}
        try:
            carriers = [type_size(const_types[n], sizes, memo) for n in const_names]
        except EvalError as e:
            return ("inconclusive", str(e))
        depth = max(
            [term_depth(formula)] + [term_depth(a) for a in axioms] + [1]
        )
        env = [0] * depth
        try:
            axioms_c = [
                compile_term(a, const_types, {n: i for i, n in enumerate(const_names)},
                             sizes, memo, {}, {}, 0)[0]
                for a in axioms
            ]
            formula_c = compile_term(
                formula, const_types, {n: i for i, n in enumerate(const_names)},
                sizes, memo, {}, {}, 0
            )[0]
        except EvalError as e:
            return ("inconclusive", str(e))
        # axiom i becomes checkable once all its constants are assigned
        supports = [term_consts(a, name_set) for a in axioms]
        axioms_at = [[] for _ in range(len(const_names) + 1)]
        order = {n: i for i, n in enumerate(const_names)}
        for ai, sup in enumerate(supports):
            k = max((order[n] + 1 for n in sup), default=0)
            axioms_at[k].append(axioms_c[ai])
        C = [0] * len(const_names)
        n = len(const_names)
        state = [steps, models]

        def rec(k):
            if state[0] > budget:
                raise BudgetExceeded()
            if k == n:
                state[0] += 1
                state[1] += 1
                if formula_c(C, env) == 0:
                    return list(C)
                return None
            for val in range(carriers[k]):
                C[k] = val
                ok = True
                for ax in axioms_at[k + 1]:
                    state[0] += 1
                    if ax(C, env) == 0:
                        ok = False
                        break
                if ok:
                    r = rec(k + 1)
                    if r is not None:
                        return r
            return None

        prefix_ok = True
        for ax in axioms_at[0]:
            state[0] += 1
            if ax(C, env) == 0:
                prefix_ok = False
                break
        if prefix_ok:
            try:
                cex = rec(0)
            except BudgetExceeded:
                return ("inconclusive", "model budget exceeded")
            if cex is not None:
                return ("counterexample", sizes, dict(zip(const_names, cex)))
        steps, models = state[0], state[1]
    return ("valid", models)
