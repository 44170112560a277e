"""Independent brute-force reference for the finite-model oracle.

Deliberately a different implementation path from the package: values
are Python objects (bool, int, dict-as-function), interpretation spaces
come from itertools.product, and evaluation is a plain recursive
interpreter. Used to cross-check verdicts on the curated formula set.
"""

from __future__ import annotations

import itertools

from dholc.holcore import (
    HAnd, HApp, HArrow, HBase, HBool, HConst, HEq, HExists, HFalse, HForall,
    HIff, HImplies, HLam, HNot, HOr, HTrue, HVar,
)


def carrier(ty, sizes):
    if isinstance(ty, HBool):
        return [False, True]
    if isinstance(ty, HBase):
        return list(range(sizes[ty.name]))
    if isinstance(ty, HArrow):
        dom = carrier(ty.dom, sizes)
        cod = carrier(ty.cod, sizes)
        tables = []
        for values in itertools.product(cod, repeat=len(dom)):
            tables.append(tuple(zip(map(_key, dom), values)))
        return tables
    raise TypeError(ty)


def _key(v):
    return v if not isinstance(v, tuple) else v


def apply_fn(fn, arg):
    k = _key(arg)
    for kk, vv in fn:
        if kk == k:
            return vv
    raise KeyError(arg)


def evaluate(t, interp, env, sizes):
    if isinstance(t, HConst):
        return interp[t.name]
    if isinstance(t, HVar):
        return env[t.name]
    if isinstance(t, HLam):
        dom = carrier(t.ty, sizes)
        return tuple(
            (_key(d), evaluate(t.body, interp, {**env, t.var: d}, sizes))
            for d in dom
        )
    if isinstance(t, HApp):
        return apply_fn(
            evaluate(t.fn, interp, env, sizes), evaluate(t.arg, interp, env, sizes)
        )
    if isinstance(t, HEq):
        return evaluate(t.lhs, interp, env, sizes) == evaluate(t.rhs, interp, env, sizes)
    if isinstance(t, HImplies):
        return (not evaluate(t.hyp, interp, env, sizes)) or evaluate(
            t.concl, interp, env, sizes
        )
    if isinstance(t, HAnd):
        return evaluate(t.lhs, interp, env, sizes) and evaluate(t.rhs, interp, env, sizes)
    if isinstance(t, HOr):
        return evaluate(t.lhs, interp, env, sizes) or evaluate(t.rhs, interp, env, sizes)
    if isinstance(t, HIff):
        return evaluate(t.lhs, interp, env, sizes) == evaluate(t.rhs, interp, env, sizes)
    if isinstance(t, HNot):
        return not evaluate(t.arg, interp, env, sizes)
    if isinstance(t, HTrue):
        return True
    if isinstance(t, HFalse):
        return False
    if isinstance(t, HForall):
        return all(
            evaluate(t.body, interp, {**env, t.var: d}, sizes)
            for d in carrier(t.ty, sizes)
        )
    if isinstance(t, HExists):
        return any(
            evaluate(t.body, interp, {**env, t.var: d}, sizes)
            for d in carrier(t.ty, sizes)
        )
    raise TypeError(t)


def reference_verdict(theory, formula, bound) -> str:
    """"valid" or "countersatisfiable" over all models of size <= bound."""
    type_syms = list(theory.type_syms)
    consts = list(theory.consts)
    for sizes_tuple in itertools.product(range(1, bound + 1), repeat=len(type_syms)):
        sizes = dict(zip(type_syms, sizes_tuple))
        spaces = [carrier(ty, sizes) for _, ty in consts]
        for combo in itertools.product(*spaces):
            interp = {n: v for (n, _), v in zip(consts, combo)}
            if all(evaluate(f, interp, {}, sizes) for _, f in theory.axioms):
                if not evaluate(formula, interp, {}, sizes):
                    return "countersatisfiable"
    return "valid"
