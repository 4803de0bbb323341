# src/isl/moments/__init__.py
from .combinatorics import (
    MomentPolynomial,
    TangentNumbers,
    a2_bound_ratio,
    a2_recursive,
    double_factorial,
    double_factorial_reading,
    leading_coefficients,
    moment_bruteforce,
    moment_poly,
    partial_sum_signs_check,
    tangent_numbers,
    truncation_bounds_check,
)
from .inequalities import calibrate_phi_constant, default_grid, scalar_inequalities_check
from .series import (
    c_theta_s,
    c_theta_s_partial_sums,
    c_theta_s_upper_bound,
    calibrate_tv_constant,
    derived_c_prime,
    kl_bound_cwn_gaussian,
    kl_gaussian_cwn,
    tv_bound_cwn_gaussian,
    tv_cwn_gaussian_exact,
)

__all__ = [
    "MomentPolynomial",
    "TangentNumbers",
    "a2_bound_ratio",
    "a2_recursive",
    "c_theta_s",
    "c_theta_s_partial_sums",
    "c_theta_s_upper_bound",
    "calibrate_phi_constant",
    "calibrate_tv_constant",
    "derived_c_prime",
    "default_grid",
    "double_factorial",
    "double_factorial_reading",
    "kl_bound_cwn_gaussian",
    "kl_gaussian_cwn",
    "leading_coefficients",
    "moment_bruteforce",
    "moment_poly",
    "partial_sum_signs_check",
    "scalar_inequalities_check",
    "tangent_numbers",
    "truncation_bounds_check",
    "tv_bound_cwn_gaussian",
    "tv_cwn_gaussian_exact",
]
