# src/isl/scan/tails.py
from __future__ import annotations

import math
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy import optimize

from ..errors import BadInputs, EmptyWitness
from ..graph.graph import Graph
from ..ising.model import IsingModel, pmf_table, spin_states
from ..ising.samplers import sample_exact
from ..utils.logger import get_logger

logger = get_logger("Psi1Tails")

DEFAULT_LAMBDAS = (0.25, 0.5, 1.0, 2.0, 4.0)


def w_values(h: Graph, states: np.ndarray) -> np.ndarray:
    """One-sample W_H = (1/|E(H)|) sum_{(i,j)∈E(H)} x_i x_j for every row of `states`."""
    if h.n_edges == 0:
        raise EmptyWitness("witness graph has no edges")
    x = np.asarray(states, dtype=np.float64)
    i = np.array([e[0] - 1 for e in h.edges])
    j = np.array([e[1] - 1 for e in h.edges])
    return np.mean(x[:, i] * x[:, j], axis=1)


def _check_dims(model: IsingModel, h: Graph) -> None:
    if model.d != h.d:
        raise BadInputs(f"model has d={model.d}, witness has d={h.d}")


def mgf_exact(model: IsingModel, h: Graph, lam: float) -> float:
    """E_Θ exp(λ W_H) for one sample, by enumeration."""
    _check_dims(model, h)
    w = w_values(h, spin_states(model.d))
    return float(pmf_table(model) @ np.exp(lam * w))


def psi1_norm_exact(model: IsingModel, h: Graph, p_max: int = 20) -> float:
    """sup_{1<=p<=p_max} p^{-1} (E|W_H|^p)^{1/p}, by enumeration."""
    _check_dims(model, h)
    if p_max < 1:
        raise BadInputs(f"p_max must be >= 1, got {p_max}")
    w = np.abs(w_values(h, spin_states(model.d)))
    p = pmf_table(model)
    return max(float(p @ w**q) ** (1.0 / q) / q for q in range(1, p_max + 1))


def psi1_orlicz(values: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    """inf{t > 0: E exp(|W|/t) <= 2} for a discrete law (uniform weights by default)."""
    a = np.abs(np.asarray(values, dtype=np.float64))
    wts = np.full(a.size, 1.0 / a.size) if weights is None else np.asarray(weights)
    if np.max(a) == 0.0:
        return 0.0

    def excess(t: float) -> float:
        return float(wts @ np.exp(a / t)) - 2.0

    hi = float(np.max(a)) / math.log(2.0) + 1e-12
    lo = float(np.max(a)) / 700.0
    return float(optimize.brentq(excess, lo, hi, xtol=1e-12))


def psi1_tail_check(
    model: IsingModel,
    h: Graph,
    reps: int = 20_000,
    seed: int = 0,
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
    constant: float = 2.0,
) -> Dict[str, Any]:
    """
    Sub-exponential behaviour of one-sample W_H.

    Exact part: E_Θ exp(sqrt(2|E(H)|)/8 · W_H) <= e by enumeration. Empirical
    part: E exp(λ|W_H|) on a λ grid and the empirical ψ1 norm, also rescaled
    by sqrt(|E(H)|) so sizes can be compared. The exact moment-form norm is
    set against constant / sqrt(|E(H)|).
    """
    _check_dims(model, h)
    if model.frobenius_norm > 0.5 + 1e-12:
        raise BadInputs(f"‖Θ‖_F = {model.frobenius_norm:.4f} must be <= 1/2")
    m = h.n_edges
    lam_star = math.sqrt(2.0 * m) / 8.0
    mgf = mgf_exact(model, h, lam_star)

    draws = sample_exact(model, reps, seed=seed)
    w = w_values(h, draws.spins)
    abs_mgf = {float(lam): float(np.mean(np.exp(lam * np.abs(w)))) for lam in lambdas}
    psi1_emp = psi1_orlicz(w)
    psi1_ex = psi1_norm_exact(model, h)
    psi1_bound = constant / math.sqrt(m)
    passed = mgf <= math.e + 1e-12
    if not passed:
        logger.warning("MGF bound fails for H=%s: %.6f > e", h.edges, mgf)
    return {
        "edges": m,
        "lambda_star": lam_star,
        "mgf_at_lambda_star": mgf,
        "mgf_bound": math.e,
        "passed": passed,
        "abs_mgf": abs_mgf,
        "psi1_empirical": psi1_emp,
        "psi1_scaled": psi1_emp * math.sqrt(m),
        "psi1_moment_exact": psi1_ex,
        "psi1_bound": psi1_bound,
        "within_psi1_bound": bool(psi1_ex <= psi1_bound),
        "reps": reps,
        "seed": seed,
    }
