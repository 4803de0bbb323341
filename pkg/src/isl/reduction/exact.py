# src/isl/reduction/exact.py
"""
Exact laws of the s support coordinates, both exchangeable: the probability of
a sign vector depends only on its number k of plus signs. Tables are indexed
by k = 0..s and hold the probability of ONE vector with k plus signs.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import gammaln, log_ndtr, logsumexp

from ..errors import BadInputs, QuadratureFail, SizeExceeded
from ..ising.curie_weiss import CurieWeissParams
from ..utils.logger import get_logger
from .spiked import SpikedModel

logger = get_logger("ExactLaws")

MAX_SIGN_S = 14
MAX_CW_S = 20
QUAD_TOL = 1e-12
GAUSS_HALF_WIDTH = 40.0


def _log_binom(s: int) -> np.ndarray:
    k = np.arange(s + 1)
    return gammaln(s + 1) - gammaln(k + 1) - gammaln(s - k + 1)


def _count_plus(v: np.ndarray) -> int:
    v = np.asarray(v)
    if v.ndim != 1 or not np.all(np.abs(v) == 1):
        raise BadInputs("sign vector must be a 1-d array of ±1")
    return int(np.sum(v > 0))


def sign_pmf_by_count(sigma: float, s: int, tol: float = QUAD_TOL) -> np.ndarray:
    """
    P(U = u) for u with k plus signs, U = sign(W), W ~ N(0, I_s + sigma 11^T):

        ∫ Φ(√σ y)^k (1 - Φ(√σ y))^(s-k) φ(y) dy.
    """
    if s > MAX_SIGN_S:
        raise SizeExceeded("s", s, MAX_SIGN_S)
    if sigma < 0:
        raise BadInputs(f"sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return np.full(s + 1, 0.5**s)

    root = math.sqrt(sigma)
    log_norm = 0.5 * math.log(2.0 * math.pi)
    out = np.empty(s + 1)
    for k in range(s + 1):

        def integrand(y: float, k: int = k) -> float:
            z = root * y
            return math.exp(k * log_ndtr(z) + (s - k) * log_ndtr(-z) - 0.5 * y * y - log_norm)

        val, err = integrate.quad(
            integrand, -GAUSS_HALF_WIDTH, GAUSS_HALF_WIDTH, points=[0.0], limit=400, epsabs=1e-15
        )
        if err > tol:
            raise QuadratureFail(f"sign pmf k={k}: error estimate {err:.2e} > {tol:.0e}")
        out[k] = val
    return out


def sign_pmf_exact(model: SpikedModel, u: np.ndarray) -> float:
    """Probability of the sign vector u on the support of `model`."""
    if len(u) != model.s:
        raise BadInputs(f"u must have length s={model.s}, got {len(u)}")
    k = _count_plus(u)
    return float(sign_pmf_by_count(model.sigma, model.s)[k])


def curie_weiss_pmf_by_count(p: CurieWeissParams) -> np.ndarray:
    """exp(θ(2k-s)^2) / Z with Z = sum_k C(s,k) exp(θ(2k-s)^2)."""
    if p.s > MAX_CW_S:
        raise SizeExceeded("s", p.s, MAX_CW_S)
    k = np.arange(p.s + 1)
    energy = p.theta * (2.0 * k - p.s) ** 2
    return np.exp(energy - logsumexp(_log_binom(p.s) + energy))


def curie_weiss_pmf_exact(p: CurieWeissParams, v: np.ndarray) -> float:
    if len(v) != p.s:
        raise BadInputs(f"v must have length s={p.s}, got {len(v)}")
    return float(curie_weiss_pmf_by_count(p)[_count_plus(v)])


def expand_by_count(table: np.ndarray) -> np.ndarray:
    """Full 2^s state table (ordered as ising.spin_states) from a by-count table."""
    s = table.size - 1
    if s > MAX_SIGN_S:
        raise SizeExceeded("s", s, MAX_SIGN_S)
    counts = np.array([bin(r).count("1") for r in range(1 << s)])
    return table[counts]


def tv_exact(pmf_a: np.ndarray, pmf_b: np.ndarray) -> float:
    """½ sum |a - b| over a common finite support."""
    a = np.asarray(pmf_a, dtype=np.float64)
    b = np.asarray(pmf_b, dtype=np.float64)
    if a.shape != b.shape:
        raise BadInputs(f"pmfs must share a support, got shapes {a.shape} and {b.shape}")
    return float(0.5 * np.sum(np.abs(a - b)))


def tv_exchangeable(by_count_a: np.ndarray, by_count_b: np.ndarray) -> float:
    """TV of two exchangeable laws on {±1}^s from their by-count tables."""
    a = np.asarray(by_count_a, dtype=np.float64)
    b = np.asarray(by_count_b, dtype=np.float64)
    if a.shape != b.shape:
        raise BadInputs(f"tables must have equal length, got {a.size} and {b.size}")
    s = a.size - 1
    return float(0.5 * np.sum(np.exp(_log_binom(s)) * np.abs(a - b)))


def sign_pair_correlation(sigma: float) -> float:
    """E[U_i U_j] = (2/π) arcsin(σ/(1+σ)) for two support coordinates."""
    if sigma < 0:
        raise BadInputs(f"sigma must be >= 0, got {sigma}")
    return 2.0 / math.pi * math.asin(sigma / (1.0 + sigma))


def curie_weiss_pair_correlation(p: CurieWeissParams) -> float:
    """E[V_i V_j], i ≠ j, from E[(sum V)^2] = s + s(s-1) E[V_i V_j]."""
    if p.s < 2:
        raise BadInputs("pair correlation needs s >= 2")
    k = np.arange(p.s + 1)
    weights = np.exp(_log_binom(p.s)) * curie_weiss_pmf_by_count(p)
    second = float(weights @ (2.0 * k - p.s) ** 2)
    return (second - p.s) / (p.s * (p.s - 1))
