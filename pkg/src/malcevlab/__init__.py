"""Decide Mal'cev conditions of finite algebras and build their combinatorial witnesses."""

from .algebra import (
    Apply,
    FiniteAlgebra,
    OpTable,
    Var,
    eval_term,
    generate_subpower,
    is_idempotent,
    power,
    product,
    quotient,
    satisfies_identity,
)
from .closure import BACKEND
from .errors import CapExceeded, MalcevLabError, NotCompatible, ParseError, VerificationError
from .formats import emit_algebra, emit_report, emit_structure, parse_algebra, parse_structure
from .free import free_algebra, free_structure, strong_coloring
from .malcev import (
    Limits,
    analyze,
    decide_congruence_identity,
    decide_day_terms,
    decide_n_cube_term,
    decide_n_permutable,
    decide_n_permutable_any,
    find_cube_blocker,
)
from .partitions import Partition, cg, join, meet
from .relstruct import RelStructure, Relation, build_p0, hom_search, verify_pentagon

__version__ = "0.1.0"

__all__ = [
    "Apply",
    "BACKEND",
    "CapExceeded",
    "FiniteAlgebra",
    "Limits",
    "MalcevLabError",
    "NotCompatible",
    "OpTable",
    "ParseError",
    "Partition",
    "RelStructure",
    "Relation",
    "Var",
    "VerificationError",
    "analyze",
    "build_p0",
    "cg",
    "decide_congruence_identity",
    "decide_day_terms",
    "decide_n_cube_term",
    "decide_n_permutable",
    "decide_n_permutable_any",
    "emit_algebra",
    "emit_report",
    "emit_structure",
    "eval_term",
    "find_cube_blocker",
    "free_algebra",
    "free_structure",
    "generate_subpower",
    "hom_search",
    "is_idempotent",
    "join",
    "meet",
    "parse_algebra",
    "parse_structure",
    "power",
    "product",
    "quotient",
    "satisfies_identity",
    "strong_coloring",
    "verify_pentagon",
]
