"""Type checker and proof-obligation compiler for a dependently typed
higher-order logic with refinement and quotient subtyping.

Pipeline: parse `.dhol` theories, expand definitional sugar and
transparent definitions, run the bidirectional kernel (which reduces
all type equality and subtyping questions to validity obligations),
translate the obligations to simply typed HOL via dependency erasure
with generated partial equivalence relations, emit TPTP THF, and
discharge obligations with a local simplifier, a finite-model oracle,
or an external prover.
"""

from .kernel import (
    Accepted, Checker, CheckResult, KernelError, Obligation, Rejected,
    check_theory, simplify_obligation,
)
from .parser import ParseError, parse_theory, print_term, print_type
from .subtype import NormalType, normalize_type, subtype_check
from .translate import (
    per_relation, translate_obligation, translate_term, translate_theory,
    translate_type, typing_predicate,
)
from .holcore import emit_tptp, hol_infer_type, read_tptp
from .oracle import check_valid_finite
from .atp import ProverVerdict, prove

__version__ = "0.1.0"

__all__ = [
    "Accepted", "Checker", "CheckResult", "KernelError", "NormalType",
    "Obligation", "ParseError", "ProverVerdict", "Rejected",
    "check_theory", "check_valid_finite", "emit_tptp", "hol_infer_type",
    "normalize_type", "parse_theory", "per_relation", "print_term",
    "print_type", "prove", "read_tptp", "simplify_obligation",
    "subtype_check", "translate_obligation", "translate_term",
    "translate_theory", "translate_type", "typing_predicate",
]
