# src/isl/eulerian/__init__.py
from .chisquare import (
    chi_square_divergence,
    chi_square_divergence_enumerated,
    chi_square_pair,
    chi_square_pair_enumerated,
    lecam_risk_lower_bound,
    log_chi_square_pair,
)
from .counting import (
    CountVector,
    CycleSpace,
    count_eulerian,
    count_eulerian_connected,
    eulerian_counts,
    p_bound,
    p_count,
    q_bound,
    q_count,
)
from .lower_bound import (
    LowerBoundInputs,
    cross_term_bound,
    lower_bound_theta,
    mean_overlap,
    negative_association_bound,
    negative_association_lhs,
    upper_bound_theta,
)
from .polynomials import Polynomial, f_pair_poly, f_poly, u_coefficients

__all__ = [
    "CountVector",
    "CycleSpace",
    "LowerBoundInputs",
    "Polynomial",
    "chi_square_divergence",
    "chi_square_divergence_enumerated",
    "chi_square_pair",
    "chi_square_pair_enumerated",
    "count_eulerian",
    "count_eulerian_connected",
    "cross_term_bound",
    "eulerian_counts",
    "f_pair_poly",
    "f_poly",
    "lecam_risk_lower_bound",
    "log_chi_square_pair",
    "lower_bound_theta",
    "mean_overlap",
    "negative_association_bound",
    "negative_association_lhs",
    "p_bound",
    "p_count",
    "q_bound",
    "q_count",
    "u_coefficients",
    "upper_bound_theta",
]
