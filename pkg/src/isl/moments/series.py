# src/isl/moments/series.py
from __future__ import annotations

import math
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate
from scipy.special import gammaln, logsumexp

from ..errors import BadInputs, DivergenceGuard, DomainError, QuadratureFail
from ..ising.curie_weiss import CurieWeissParams, cwn_log_density
from ..utils.logger import get_logger
from .combinatorics import moment_poly

logger = get_logger("CwnSeries")

MAX_SERIES_TERMS = 400
SERIES_RTOL = 1e-17
QUAD_TOL = 1e-10
A2_SUP = 1.0 / 18.0


def derived_c_prime(a2_sup: float = A2_SUP) -> Tuple[float, ...]:
    """
    C'_i = 192 a2_sup C(4, i-1) 2^(i-1).

    The a2 tail of the series sums to 192 a2_sup θ² sθ / (1-2sθ)^5, and
    x/q^5 = sum_i C(4, i-1) 2^(i-1) (x/q)^i with q = 1 - 2x.
    """
    return tuple(192.0 * a2_sup * math.comb(4, i - 1) * 2.0 ** (i - 1) for i in range(1, 6))


DEFAULT_C_PRIME = derived_c_prime()


def _check(theta: float, s: int) -> None:
    if theta < 0:
        raise BadInputs(f"theta must be >= 0, got {theta}")
    if s < 1:
        raise BadInputs(f"s must be >= 1, got {s}")


def c_theta_s(theta: float, s: int, terms: Optional[int] = None, route: str = "binomial") -> float:
    """
    C(θ, s) = sum_k C(s,k) exp(θ(2k-s)^2) / 2^s = sum_m θ^m P_{2m}(s) / m!.

    route="binomial" is always valid; route="series" needs sθ < 1/2 and sums
    `terms` terms (default: until the next term is negligible).
    """
    _check(theta, s)
    if route == "binomial":
        k = np.arange(s + 1)
        log_binom = gammaln(s + 1) - gammaln(k + 1) - gammaln(s - k + 1)
        return float(np.exp(logsumexp(log_binom + theta * (2.0 * k - s) ** 2) - s * math.log(2.0)))
    if route != "series":
        raise BadInputs(f"route must be 'binomial' or 'series', got {route!r}")
    if s * theta >= 0.5:
        raise DivergenceGuard(f"series diverges for s*theta = {s * theta:.4f} >= 1/2")
    if theta == 0.0:
        return 1.0

    limit = terms if terms is not None else MAX_SERIES_TERMS
    total = 1.0
    for m in range(1, limit):
        term = math.exp(m * math.log(theta) + math.log(moment_poly(m)(s)) - math.lgamma(m + 1))
        total += term
        if terms is None and term < SERIES_RTOL * total:
            break
    else:
        if terms is None:
            logger.warning(
                "C(theta, s) series not converged after %d terms (s*theta=%.4f)", limit, s * theta
            )
    return total


def c_theta_s_partial_sums(theta: float, s: int, terms: int) -> np.ndarray:
    """Partial sums of the series route, one per number of terms 1..terms."""
    _check(theta, s)
    out = np.empty(terms)
    total = 0.0
    for m in range(terms):
        total += theta**m * moment_poly(m)(s) / math.factorial(m)
        out[m] = total
    return out


def c_theta_s_upper_bound(
    theta: float, s: int, c_prime: Sequence[float] = DEFAULT_C_PRIME
) -> float:
    """(1-2sθ)^{-1/2} - sθ²(1-2sθ)^{-5/2} + θ² sum_i C'_i (sθ)^i / (1-2sθ)^i."""
    _check(theta, s)
    x = s * theta
    if x >= 0.5:
        raise DomainError(f"s*theta = {x:.4f} must be < 1/2")
    q = 1.0 - 2.0 * x
    tail = sum(c * (x / q) ** i for i, c in enumerate(c_prime, start=1))
    return q**-0.5 - s * theta**2 * q**-2.5 + theta**2 * tail


def tv_bound_cwn_gaussian(theta: float, s: int, n: int, C: float = 1.0) -> float:
    """C sqrt(n θ² sum_{i=1}^5 (sθ)^i / (1-2sθ)^{i-1/2})."""
    _check(theta, s)
    x = s * theta
    if x >= 0.5:
        raise DomainError(f"s*theta = {x:.4f} must be < 1/2")
    q = 1.0 - 2.0 * x
    inner = sum(x**i / q ** (i - 0.5) for i in range(1, 6))
    return C * math.sqrt(n * theta**2 * inner)


def kl_bound_cwn_gaussian(theta: float, s: int, n: int = 1) -> float:
    """
    n (log(C(θ,s) sqrt(1-2sθ)) + sθ²(1-2sθ)^{-2}), a bound on the n-sample
    KL(N(0, (1-2sθ)^{-1}) ‖ CWN).
    """
    _check(theta, s)
    x = s * theta
    if x >= 0.5:
        raise DomainError(f"s*theta = {x:.4f} must be < 1/2")
    q = 1.0 - 2.0 * x
    return n * (math.log(c_theta_s(theta, s) * math.sqrt(q)) + s * theta**2 / q**2)


def _gauss_logpdf(y: np.ndarray | float, var: float) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    return -0.5 * y**2 / var - 0.5 * math.log(2.0 * math.pi * var)


def _half_width(p: CurieWeissParams, var: float) -> float:
    return max(p.grid_half_width(), 12.0 * math.sqrt(var))


def _quad(fn: Callable[[float], float], half: float, what: str, tol: float) -> float:
    val, err = integrate.quad(fn, -half, half, points=[0.0], limit=400, epsabs=1e-14)
    if err > tol:
        raise QuadratureFail(f"{what}: error estimate {err:.2e} > {tol:.0e}")
    return float(val)


def tv_cwn_gaussian_exact(theta: float, s: int, tol: float = QUAD_TOL) -> float:
    """One-sample TV between CWN(s, θ) and N(0, (1-2sθ)^{-1}) by adaptive quadrature."""
    p = CurieWeissParams(s, theta)
    p.require_subcritical()
    var = 1.0 / (1.0 - 2.0 * s * theta)

    def integrand(y: float) -> float:
        return abs(math.exp(float(cwn_log_density(p, y))) - math.exp(float(_gauss_logpdf(y, var))))

    return 0.5 * _quad(integrand, _half_width(p, var), "TV(CWN, Gaussian)", tol)


def kl_gaussian_cwn(theta: float, s: int, tol: float = QUAD_TOL) -> float:
    """KL(N(0, (1-2sθ)^{-1}) ‖ CWN(s, θ)) by adaptive quadrature."""
    p = CurieWeissParams(s, theta)
    p.require_subcritical()
    var = 1.0 / (1.0 - 2.0 * s * theta)

    def integrand(y: float) -> float:
        lg = float(_gauss_logpdf(y, var))
        return math.exp(lg) * (lg - float(cwn_log_density(p, y)))

    return max(_quad(integrand, _half_width(p, var), "KL(Gaussian, CWN)", tol), 0.0)


def calibrate_tv_constant(grid: Iterable[Tuple[int, float]]) -> float:
    """Smallest C making tv_bound_cwn_gaussian(n=1) dominate the quadrature TV on `grid`."""
    best = 0.0
    for s, theta in grid:
        if theta <= 0:
            continue
        ratio = tv_cwn_gaussian_exact(theta, s) / tv_bound_cwn_gaussian(theta, s, 1)
        best = max(best, ratio)
    logger.info("Calibrated CWN/Gaussian TV constant: %.6f", best)
    return best
