"""Rex graphs, move calculus and set-level checks for tetrahedron-type equations."""
from __future__ import annotations

from .calculus import (
    DerivationError,
    Equation,
    MoveTrace,
    commutation_equivalent,
    derive_equation,
    index_flip_f4,
    mirror_trace,
    move_to_operators,
    normalize,
    trace_to_expression,
)
from .coxeter import (
    CoxeterType,
    MoveLabel,
    ResourceLimitError,
    available_moves,
    coxeter_matrix,
    is_reduced,
    longest_word,
    rex_graph,
)
from .operators import IndexedOperator, OperatorExpression, Permutation, parse_product
from .qfield import QuadraticFieldScalar
from .solutions import (
    DomainSpec,
    VerificationReport,
    apply_operator,
    eval_expression,
    figure3_chains,
    k_map,
    r_map,
    register_candidate_y,
    verify_equation,
)

__all__ = [
    "CoxeterType", "DerivationError", "DomainSpec", "Equation", "IndexedOperator", "MoveLabel", "MoveTrace",
    "OperatorExpression", "Permutation", "QuadraticFieldScalar", "ResourceLimitError", "VerificationReport",
    "apply_operator", "available_moves", "commutation_equivalent", "coxeter_matrix", "derive_equation",
    "eval_expression", "figure3_chains", "index_flip_f4", "is_reduced", "k_map", "longest_word",
    "mirror_trace", "move_to_operators", "normalize", "parse_product", "r_map", "register_candidate_y",
    "rex_graph", "trace_to_expression", "verify_equation",
]
