"""Polynomial tau models, Hirota-form equations and related checks."""

from .equations import EQUATION_IDS, REGISTRY, conjugation_defect, equation_sides, eval_equation
from .model import PolynomialTauModel, TimePoint, dop, hessian, op_vector, partial
from .reduction import (
    det_check_e99,
    dtc_omega,
    e99_determinant,
    e99_rows,
    reduce_point,
    reduction_map,
    three_term_check,
)
from .search import quadratic_solution_search, random_point
from .useries import e4_diagnostic, e6_residual, extract_u_series, second_derivs_kp

__all__ = [
    "EQUATION_IDS",
    "REGISTRY",
    "PolynomialTauModel",
    "TimePoint",
    "conjugation_defect",
    "det_check_e99",
    "dop",
    "dtc_omega",
    "e4_diagnostic",
    "e6_residual",
    "e99_determinant",
    "e99_rows",
    "equation_sides",
    "eval_equation",
    "extract_u_series",
    "hessian",
    "op_vector",
    "partial",
    "quadratic_solution_search",
    "random_point",
    "reduce_point",
    "reduction_map",
    "second_derivs_kp",
    "three_term_check",
]
