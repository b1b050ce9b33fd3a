"""Classification, growth analysis and numeric checks for
w''w - w'^2 + a w'w + b w^2 = alpha w + beta w' + gamma with rational coefficients."""

from .algebra import Poly, RatFunc, resultant, squarefree_decomposition
from .classifier import Classification, Coefficients, classify, consistency_reduce, derived_AB, normalize_hayman
from .growth import GrowthKind, GrowthReport, growth_report, infinite_order_scenarios
from .parser import ParseError, format_ratfunc, parse_ratfunc
from .series import central_index, order_estimate, residual_check, taylor_solve
from .toolkit import exp_integral_form, is_square, rational_solutions_linear_ode, residue_spectrum

__all__ = [
    "Classification",
    "Coefficients",
    "GrowthKind",
    "GrowthReport",
    "ParseError",
    "Poly",
    "RatFunc",
    "central_index",
    "classify",
    "consistency_reduce",
    "derived_AB",
    "exp_integral_form",
    "format_ratfunc",
    "growth_report",
    "infinite_order_scenarios",
    "is_square",
    "normalize_hayman",
    "order_estimate",
    "parse_ratfunc",
    "rational_solutions_linear_ode",
    "residual_check",
    "residue_spectrum",
    "resultant",
    "squarefree_decomposition",
    "taylor_solve",
]
