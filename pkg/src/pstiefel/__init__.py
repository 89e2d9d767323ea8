"""Exact p-local cohomology of complex Stiefel manifolds and their quotients.

Closed-form presentations, a Serre spectral-sequence oracle, a Chern character
stable-splitting certificate and verdicts for the p-local splitting theorems.
"""

from .algebra import GradedModuleTable, RingPresentation, graded_table, poincare_polynomial
from .chern import chern_x_expansion, gamma_integrality_window, stable_split_certificate
from .errors import DomainError, UnsupportedIdeal, UnsupportedRegime
from .plocal import LocalScalar, adams_m_valuation, binomial, complete_symmetric_sum, p_valuation
from .serre import compare_tables, run_pw_fibration, run_wm_fibration
from .spaces import PLW, PW, WM, SpaceDescriptor, W, comparison_space, minimal_model, presentation
from .verdict import M_bound_check, full_verdict, stable_range_check, theorem_A_bound

__version__ = "0.1.0"

__all__ = [
    "DomainError", "GradedModuleTable", "LocalScalar", "M_bound_check", "PLW", "PW",
    "RingPresentation", "SpaceDescriptor", "UnsupportedIdeal", "UnsupportedRegime", "W", "WM",
    "adams_m_valuation", "binomial", "chern_x_expansion", "compare_tables", "comparison_space",
    "complete_symmetric_sum", "full_verdict", "gamma_integrality_window", "graded_table",
    "minimal_model", "p_valuation", "poincare_polynomial", "presentation", "run_pw_fibration",
    "run_wm_fibration", "stable_range_check", "stable_split_certificate", "theorem_A_bound",
]
