"""Brute-force finite-model oracle for the HOL image.

Enumerates all models of a theory up to a carrier size bound and
evaluates a formula in each: a counterexample refutes the formula, and
surviving every model earns the (bounded!) verdict `finite-valid(N)` --
validity over models of size at most N, not HOL validity.

The evaluation kernel lives in `_evalcore`; a Cython-compiled twin
(`_evalcore_cy`, built from the same source) is preferred when present.
Set DHOLC_PURE=1 to force the pure-Python kernel.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional, Union

from ..holcore import HArrow, HBase, HBool, HolTerm, HolTheory, HolType

if os.environ.get("DHOLC_PURE"):
    from . import _evalcore as _core
else:
    try:
        from . import _evalcore_cy as _core  # type: ignore[attr-defined]
    except ImportError:
        from . import _evalcore as _core

BACKEND = "cython" if _core.__name__.endswith("_cy") else "python"

DEFAULT_BUDGET = 20_000_000

EvalError = _core.EvalError


@dataclass
class FiniteModel:
    """Carrier sizes per base type plus integer-encoded interpretations."""

    sizes: dict[str, int]
    interps: dict[str, int]
    theory: Optional[HolTheory] = field(default=None, repr=False)

    def carrier_size(self, ty: HolType) -> int:
        return _core.type_size(ty, self.sizes, {})

    def decode(self, name: str):
        assert self.theory is not None
        ty = self.theory.const_type(name)
        return decode_value(ty, self.interps[name], self.sizes)


@dataclass(frozen=True)
class Valid:
    bound: int
    models_checked: int

    def label(self) -> str:
        return f"finite-valid({self.bound})"


@dataclass(frozen=True)
class Counterexample:
    model: FiniteModel

    def label(self) -> str:
        return "counterexample"


@dataclass(frozen=True)
class Inconclusive:
    reason: str

    def label(self) -> str:
        return "inconclusive"


OracleVerdict = Union[Valid, Counterexample, Inconclusive]


def decode_value(ty: HolType, enc: int, sizes: dict[str, int]):
    """Integer encoding back to bool / carrier index / function table."""
    if isinstance(ty, HBool):
        return bool(enc)
    if isinstance(ty, HBase):
        return enc
    if isinstance(ty, HArrow):
        dom = _core.type_size(ty.dom, sizes, {})
        cod = _core.type_size(ty.cod, sizes, {})
        table = []
        for _ in range(dom):
            table.append(decode_value(ty.cod, enc % cod, sizes))
            enc //= cod
        return tuple(table)
    raise EvalError(f"cannot decode value of {ty!r}")


def encode_value(ty: HolType, val, sizes: dict[str, int]) -> int:
    if isinstance(ty, HBool):
        return int(bool(val))
    if isinstance(ty, HBase):
        return int(val)
    if isinstance(ty, HArrow):
        cod = _core.type_size(ty.cod, sizes, {})
        acc = 0
        mul = 1
        for entry in val:
            acc += encode_value(ty.cod, entry, sizes) * mul
            mul *= cod
        return acc
    raise EvalError(f"cannot encode value of {ty!r}")


def eval_term(
    model: FiniteModel,
    env: dict[str, tuple[HolType, object]],
    t: HolTerm,
):
    """Evaluate a term in a model under an environment of typed values."""
    theory = model.theory or HolTheory()
    const_names = [n for n, _ in theory.consts]
    const_types = {n: ty for n, ty in theory.consts}
    memo: dict = {}
    # environment variables become extra "constants" of the compilation
    names = list(const_names)
    types = dict(const_types)
    values = [model.interps.get(n, 0) for n in const_names]
    for vname, (vty, vval) in env.items():
        names.append(vname)
        types[vname] = vty
        values.append(encode_value(vty, vval, model.sizes))
    slots = {n: i for i, n in enumerate(names)}
    depth = max(_core.term_depth(t), 1)
    clo, ty = _core.compile_term(
        t, types, slots, model.sizes, memo, {}, {}, 0
    )
    result = clo(values, [0] * depth)
    return decode_value(ty, result, model.sizes)


def check_valid_finite(
    theory: HolTheory,
    formula: HolTerm,
    size_bound: int,
    budget: int = DEFAULT_BUDGET,
) -> OracleVerdict:
    """Check a closed boolean formula in every model of the theory with
    carriers of size at most size_bound."""
    const_names = [n for n, _ in theory.consts]
    const_types = [ty for _, ty in theory.consts]
    axioms = [f for _, f in theory.axioms]
    result = _core.search(
        list(theory.type_syms), const_names, const_types, axioms, formula,
        size_bound, budget,
    )
    if result[0] == "valid":
        return Valid(size_bound, result[1])
    if result[0] == "counterexample":
        return Counterexample(FiniteModel(result[1], result[2], theory))
    return Inconclusive(result[1])


def format_model(model: FiniteModel) -> str:
    """Human-readable table form of a counterexample."""
    lines = []
    for name, size in sorted(model.sizes.items()):
        lines.append(f"carrier {name}: {{{', '.join(str(i) for i in range(size))}}}")
    theory = model.theory
    for name, enc in model.interps.items():
        if theory is not None and theory.const_type(name) is not None:
            val = model.decode(name)
        else:
            val = enc
        lines.append(f"{name} = {_format_value(val)}")
    return "\n".join(lines)


def _format_value(v) -> str:
    if isinstance(v, tuple):
        return "[" + ", ".join(_format_value(x) for x in v) + "]"
    return str(v)
