# src/isl/ising/curie_weiss.py
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import expit, gammaln, log_expit, logsumexp

from ..errors import BadInputs, DomainError, QuadratureFail
from ..utils.logger import get_logger
from .model import IsingModel
from .samplers import SampleMatrix

logger = get_logger("CurieWeiss")

GRID_POINTS = 2**14
GRID_MARGIN = 12.0
QUAD_TOL = 1e-10


@dataclass(frozen=True)
class CurieWeissParams:
    """Curie-Weiss law on s spins: P(v) ∝ exp(theta * (sum_i v_i)^2)."""

    s: int
    theta: float

    def __post_init__(self) -> None:
        if self.s < 1:
            raise BadInputs(f"s must be >= 1, got {self.s}")
        if self.theta < 0:
            raise BadInputs(f"theta must be >= 0, got {self.theta}")

    @property
    def subcritical(self) -> bool:
        return self.s * self.theta < 0.5

    def require_subcritical(self) -> None:
        if not self.subcritical:
            raise DomainError(f"s*theta = {self.s * self.theta:.4f} must be < 1/2")

    @property
    def slope(self) -> float:
        """sqrt(2 theta), the coupling between Y' and each spin."""
        return math.sqrt(2.0 * self.theta)

    def grid_half_width(self, margin: float = GRID_MARGIN) -> float:
        return self.slope * self.s + margin


def _log_binom(s: int) -> np.ndarray:
    k = np.arange(s + 1)
    return gammaln(s + 1) - gammaln(k + 1) - gammaln(s - k + 1)


def log_cw_weights(p: CurieWeissParams) -> np.ndarray:
    """log exp(theta (2k - s)^2) for k = 0..s (unnormalized, one configuration each)."""
    k = np.arange(p.s + 1)
    return p.theta * (2.0 * k - p.s) ** 2


def log_cwn_normalizer(p: CurieWeissParams) -> float:
    """log(Z_{Y'} / sqrt(2 pi)) = log sum_k C(s,k) exp(theta (2k-s)^2) / 2^s."""
    return float(logsumexp(_log_binom(p.s) + log_cw_weights(p)) - p.s * math.log(2.0))


def _log_cosh(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(x, -x) - math.log(2.0)


def cwn_log_density(p: CurieWeissParams, y: np.ndarray | float) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    return (
        p.s * _log_cosh(p.slope * y)
        - 0.5 * y**2
        - 0.5 * math.log(2.0 * math.pi)
        - log_cwn_normalizer(p)
    )


def cwn_density(p: CurieWeissParams, y: np.ndarray | float) -> np.ndarray | float:
    """Normalized CWN density ∝ cosh(sqrt(2 theta) y)^s exp(-y^2/2)."""
    out = np.exp(cwn_log_density(p, y))
    return float(out) if np.ndim(out) == 0 else out


def cw_to_edge_coupling(p: CurieWeissParams) -> IsingModel:
    """Per-edge model with the same law: every pair gets coupling 2*theta."""
    theta = 2.0 * p.theta * (np.ones((p.s, p.s)) - np.eye(p.s))
    return IsingModel(p.s, theta, high_temperature=False)


def cwn_grid(p: CurieWeissParams, points: int = GRID_POINTS, margin: float = GRID_MARGIN) -> tuple:
    """(grid, cdf) of Y' on [-L, L], L = sqrt(2 theta) s + margin."""
    half = p.grid_half_width(margin)
    y = np.linspace(-half, half, points)
    dens = np.exp(cwn_log_density(p, y))
    cdf = integrate.cumulative_trapezoid(dens, y, initial=0.0)
    cdf /= cdf[-1]
    return y, cdf


def sample_curie_weiss(
    p: CurieWeissParams,
    n: int,
    seed: int = 0,
    points: int = GRID_POINTS,
    margin: float = GRID_MARGIN,
) -> SampleMatrix:
    """
    Conditional-i.i.d. generation: Y' ~ CWN by inverse CDF on a tabulated grid,
    then V_i i.i.d. with P(V_i = 1 | Y') = g(sqrt(2 theta) Y'),
    g(z) = e^z / (e^z + e^-z).
    """
    rng = np.random.default_rng(seed)
    if p.theta == 0.0:
        y = np.zeros(n)
    else:
        grid, cdf = cwn_grid(p, points, margin)
        y = np.interp(rng.random(n), cdf, grid)
    plus = expit(2.0 * p.slope * y)
    v = np.where(rng.random((n, p.s)) < plus[:, None], 1, -1).astype(np.int8)
    return SampleMatrix(v, int(seed), "curie_weiss_cond_iid")


def curie_weiss_conditional_pmf(p: CurieWeissParams, tol: float = QUAD_TOL) -> np.ndarray:
    """
    Probability of one configuration with k plus-spins, k = 0..s, obtained by
    integrating g^k (1-g)^(s-k) against the CWN density.
    """
    half = p.grid_half_width()
    a = 2.0 * p.slope
    out = np.empty(p.s + 1)
    for k in range(p.s + 1):

        def integrand(y: float, k: int = k) -> float:
            z = a * y
            return math.exp(
                k * log_expit(z) + (p.s - k) * log_expit(-z) + float(cwn_log_density(p, y))
            )

        val, err = integrate.quad(
            integrand, -half, half, points=[0.0], limit=400, epsabs=1e-15, epsrel=1e-12
        )
        if err > tol:
            raise QuadratureFail(f"conditional pmf k={k}: error estimate {err:.2e} > {tol:.0e}")
        out[k] = val
    return out
