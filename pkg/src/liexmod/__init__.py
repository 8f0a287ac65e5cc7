"""Exact tools for Lie algebras, mutual actions, Peiffer products and crossed modules."""

from .actions import Action, check_action, check_compatible, conjugation, evaluate_word
from .copro import flat_object, peiffer_oracle, peiffer_saturate, peiffer_truncated, truncated_coproduct
from .exactlin import GF, QQ, Matrix, Subspace, kernel, rref, saturate
from .freelie import HallAlgebra, LieExpr, Letter, expand, hall_algebra, normalize, normalize_pinned, parse_expr
from .liealg import LieAlgebra, LinearMap, check_jacobi, check_morphism, direct_sum, quotient_by_ideal
from .xmod import (
    CrossedModule,
    XModMorphism,
    action_on_peiffer,
    check_xmod,
    copair_xmod,
    induced_actions,
    peiffer_xmods,
    theorem_roundtrip,
    xmod_coproduct,
    xmod_coproduct_mediator,
)

__all__ = [
    "Action",
    "CrossedModule",
    "GF",
    "HallAlgebra",
    "Letter",
    "LieAlgebra",
    "LieExpr",
    "LinearMap",
    "Matrix",
    "QQ",
    "Subspace",
    "XModMorphism",
    "action_on_peiffer",
    "check_action",
    "check_compatible",
    "check_jacobi",
    "check_morphism",
    "check_xmod",
    "conjugation",
    "copair_xmod",
    "direct_sum",
    "evaluate_word",
    "expand",
    "flat_object",
    "hall_algebra",
    "induced_actions",
    "kernel",
    "normalize",
    "normalize_pinned",
    "parse_expr",
    "peiffer_oracle",
    "peiffer_saturate",
    "peiffer_truncated",
    "peiffer_xmods",
    "quotient_by_ideal",
    "rref",
    "saturate",
    "theorem_roundtrip",
    "truncated_coproduct",
    "xmod_coproduct",
    "xmod_coproduct_mediator",
]
