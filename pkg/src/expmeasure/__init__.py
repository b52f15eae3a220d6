"""Certified transcendence-measure toolkit for values of exp at algebraic points."""

from .algebraics import (AlgebraicNumber, Ball, Box, conjugates,
                         denominator_surrogate, house, house_den_bound_check,
                         inverse, make_algebraic, parse_algebraic)
from .approximants import (ApproximantSystem, build_column, build_system,
                           det_at_one_check, metric_bounds_report, scaled_values)
from .effective import (BoundEvaluation, EffectiveConstants,
                        certified_lower_bound, choose_p_and_bound, constants,
                        find_n0)
from .exponents import (OptimalChoice, closed_form_check, competing_exponents,
                        floor_identity_check, monotonicity_check, optimal_p,
                        parity_scan, phi, phi_monotonicity_check, psi,
                        psi_bounds_check)
from .lab import (LabReport, MinAbsResult, asymptotic_spot_check,
                  bound_vs_reality, min_abs_value)
from .siegel import SiegelCertificate, build_D, column_reduction_check, verify_chain

__version__ = "0.1.0"

__all__ = [
    "AlgebraicNumber", "Ball", "Box", "conjugates", "denominator_surrogate",
    "house", "house_den_bound_check", "inverse", "make_algebraic",
    "parse_algebraic", "ApproximantSystem", "build_column", "build_system",
    "det_at_one_check", "metric_bounds_report", "scaled_values",
    "BoundEvaluation", "EffectiveConstants", "certified_lower_bound",
    "choose_p_and_bound", "constants", "find_n0", "OptimalChoice",
    "closed_form_check", "competing_exponents", "floor_identity_check",
    "monotonicity_check", "optimal_p", "parity_scan", "phi",
    "phi_monotonicity_check", "psi", "psi_bounds_check", "LabReport",
    "MinAbsResult", "asymptotic_spot_check", "bound_vs_reality",
    "min_abs_value", "SiegelCertificate", "build_D", "column_reduction_check",
    "verify_chain", "__version__",
]
