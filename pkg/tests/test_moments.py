import math
from fractions import Fraction

import numpy as np
import pytest

from src.isl.errors import BadInputs, DivergenceGuard, DomainError
from src.isl.moments import (
    a2_bound_ratio,
    a2_recursive,
    c_theta_s,
    c_theta_s_partial_sums,
    c_theta_s_upper_bound,
    calibrate_phi_constant,
    default_grid,
    derived_c_prime,
    double_factorial,
    double_factorial_reading,
    kl_bound_cwn_gaussian,
    kl_gaussian_cwn,
    leading_coefficients,
    moment_bruteforce,
    moment_poly,
    partial_sum_signs_check,
    scalar_inequalities_check,
    tangent_numbers,
    truncation_bounds_check,
    tv_bound_cwn_gaussian,
    tv_cwn_gaussian_exact,
)


def test_tangent_numbers() -> None:
    tn = tangent_numbers(4)
    assert tn.values == (1, 2, 16, 272)
    assert tn.odd(5) == 16
    with pytest.raises(BadInputs):
        tn.odd(4)


@pytest.mark.parametrize(
    "m,ascending",
    [
        (0, [1]),
        (1, [0, 1]),
        (2, [0, -2, 3]),
        (3, [0, 16, -30, 15]),
        (4, [0, -272, 588, -420, 105]),
    ],
)
def test_low_order_polynomials(m: int, ascending: list) -> None:
    assert moment_poly(m).ascending() == ascending


@pytest.mark.parametrize("m", range(0, 9))
def test_polynomial_matches_brute_force(m: int) -> None:
    poly = moment_poly(m)
    for s in range(0, 21):
        assert poly(s) == moment_bruteforce(m, s)


@pytest.mark.parametrize("m,s,expected", [(1, 5, 5), (2, 4, 40), (0, 7, 1)])
def test_brute_force_values(m: int, s: int, expected: int) -> None:
    assert moment_bruteforce(m, s) == expected


@pytest.mark.parametrize("m", range(1, 9))
def test_truncation_and_partial_sum_signs(m: int) -> None:
    for s in range(1, 21):
        assert partial_sum_signs_check(m, s)
        for l in range((m + 1) // 2):
            assert truncation_bounds_check(m, s, l)


@pytest.mark.parametrize("m,s,l", [(1, 3, 0), (3, 7, 0), (5, 15, 1)])
def test_truncation_examples(m: int, s: int, l: int) -> None:
    assert truncation_bounds_check(m, s, l)


def test_leading_coefficients_closed_forms() -> None:
    assert leading_coefficients(3) == (15, -30, 16)
    for m in range(3, 9):
        a0, a1, a2 = leading_coefficients(m)
        assert a0 == double_factorial(2 * m - 1)
        assert a1 == -m * (m - 1) * double_factorial(2 * m - 1) // 3
        assert a2 == a2_recursive(m)


def test_double_factorial_reading_is_odd() -> None:
    assert double_factorial(7) == 105
    assert double_factorial(0) == 1
    assert double_factorial_reading(8) == "odd"


def test_a2_ratio_increases_below_limit() -> None:
    ratios = [a2_bound_ratio(m) for m in range(3, 9)]
    assert ratios[0] == Fraction(16, 360)
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert all(r < Fraction(1, 18) for r in ratios)
    with pytest.raises(BadInputs):
        a2_bound_ratio(2)


@pytest.mark.parametrize("s,theta", [(5, 0.02), (10, 0.03), (20, 0.01), (3, 0.05)])
def test_series_matches_binomial(s: int, theta: float) -> None:
    assert c_theta_s(theta, s, route="series") == pytest.approx(c_theta_s(theta, s), rel=1e-12)


def test_series_partial_sums_increase() -> None:
    sums = c_theta_s_partial_sums(0.03, 8, 60)
    assert sums[0] == 1.0
    assert np.all(np.diff(sums) >= 0)
    assert sums[-1] == pytest.approx(c_theta_s(0.03, 8), rel=1e-10)


def test_series_divergence_guard() -> None:
    with pytest.raises(DivergenceGuard):
        c_theta_s(0.1, 5, route="series")
    assert c_theta_s(0.1, 5) > 1.0
    assert c_theta_s(0.0, 5, route="series") == 1.0


def test_unknown_route() -> None:
    with pytest.raises(BadInputs, match="route"):
        c_theta_s(0.01, 3, route="magic")


def test_derived_constants() -> None:
    c = derived_c_prime()
    assert c[0] == pytest.approx(192.0 / 18.0)
    assert c[2] == pytest.approx(256.0)
    assert len(c) == 5


@pytest.mark.parametrize("s", [1, 2, 5, 12, 30])
@pytest.mark.parametrize("load", [0.02, 0.1, 0.25, 0.4, 0.48])
def test_upper_bound_dominates(s: int, load: float) -> None:
    theta = load / s
    assert c_theta_s(theta, s) <= c_theta_s_upper_bound(theta, s) * (1.0 + 1e-12)


def test_bounds_need_subcritical_load() -> None:
    with pytest.raises(DomainError):
        c_theta_s_upper_bound(0.1, 5)
    with pytest.raises(DomainError):
        tv_bound_cwn_gaussian(0.1, 5, 10)


def test_tv_bound_scales_with_root_n() -> None:
    one = tv_bound_cwn_gaussian(0.02, 5, 1)
    assert tv_bound_cwn_gaussian(0.02, 5, 100) == pytest.approx(10.0 * one)
    assert tv_bound_cwn_gaussian(0.02, 5, 100, C=2.0) == pytest.approx(20.0 * one)


@pytest.mark.parametrize("s,theta", [(5, 0.02), (8, 0.025), (12, 0.025)])
def test_quadrature_against_bounds(s: int, theta: float) -> None:
    tv = tv_cwn_gaussian_exact(theta, s)
    kl = kl_gaussian_cwn(theta, s)
    assert 0.0 <= tv <= 1.0
    assert tv <= math.sqrt(kl / 2.0) + 1e-9
    assert kl <= kl_bound_cwn_gaussian(theta, s) + 1e-12
    assert tv <= tv_bound_cwn_gaussian(theta, s, 1)


def test_scalar_inequalities_hold() -> None:
    report = scalar_inequalities_check()
    assert report["passed"], [r for r in report["inequalities"] if not r["passed"]]
    assert len(report["inequalities"]) == 8
    assert report["grid"]["points"] == 20_001
    assert report["grid"]["min"] == -10.0
    assert report["grid"]["max"] == 10.0
    assert list(report["table"].columns)[0] == "x"


def test_scalar_inequalities_detect_a_bad_constant() -> None:
    report = scalar_inequalities_check(phi_sixth=-1.0)
    failed = {r["name"] for r in report["inequalities"] if not r["passed"]}
    assert "log_phi_upper" in failed


def test_inequality_grid_is_bounded() -> None:
    with pytest.raises(BadInputs):
        scalar_inequalities_check(grid=[0.0, 11.0])
    with pytest.raises(BadInputs):
        scalar_inequalities_check(grid=[])


def test_phi_constant_is_small() -> None:
    c = calibrate_phi_constant()
    assert 0.0 <= c <= 0.05


def test_default_grid_step() -> None:
    x = default_grid()
    assert x.size == 20_001
    np.testing.assert_allclose(np.diff(x), 1e-3, rtol=1e-9)
    assert default_grid(points=5).tolist() == [-10.0, -5.0, 0.0, 5.0, 10.0]
