# src/isl/eulerian/chisquare.py
from __future__ import annotations

import math
from functools import reduce
from typing import Dict, List, Tuple

import numpy as np

from ..errors import BadInputs, SizeExceeded
from ..graph.families import GraphFamily, enumerate_placements
from ..graph.graph import Graph
from ..ising.model import IsingModel, pmf_table
from ..utils.logger import get_logger
from ..utils.parallel import parallel_map
from .polynomials import Polynomial, f_poly, u_coefficients

logger = get_logger("ChiSquare")

LOG_OVERFLOW = 700.0
MAX_JOINT_BITS = 16


def log_chi_square_pair(g: Graph, h: Graph, theta: float, n: int) -> float:
    """n * log(1 + u(t) / (f_G(t) f_G'(t))), t = tanh(theta)."""
    if n < 1:
        raise BadInputs(f"n must be >= 1, got {n}")
    if theta < 0:
        raise BadInputs(f"theta must be >= 0, got {theta}")
    if theta == 0.0 or not (g.vertices & h.vertices):
        return 0.0
    t = math.tanh(theta)
    u = u_coefficients(g, h)
    return n * math.log1p(u(t) / (f_poly(g)(t) * f_poly(h)(t)))


def chi_square_pair(g: Graph, h: Graph, theta: float, n: int) -> float:
    """
    E_{0,n}[(dP_{Θ,n}/dP_{0,n}) (dP_{Θ',n}/dP_{0,n})] with Θ = θA_g, Θ' = θA_h:

        [1 + (f_{G,G'}(t) - f_G(t) f_G'(t)) / (f_G(t) f_G'(t))]^n.
    """
    logv = log_chi_square_pair(g, h, theta, n)
    if logv > LOG_OVERFLOW:
        logger.warning("chi-square pair overflows (log value %.1f); returning inf", logv)
        return math.inf
    return math.exp(logv)


def chi_square_pair_enumerated(g: Graph, h: Graph, theta: float, n: int) -> float:
    """Same quantity by 2^d state enumeration: (2^d sum_x P_Θ(x) P_Θ'(x))^n."""
    pg = pmf_table(IsingModel.from_graph(g, theta, high_temperature=False))
    ph = pmf_table(IsingModel.from_graph(h, theta, high_temperature=False))
    return float((2.0**g.d * np.dot(pg, ph)) ** n)


def _pair_row(
    args: Tuple[int, List[Graph], Dict[int, Polynomial], float, int]
) -> List[float]:
    i, placements, f_cache, theta, n = args
    g = placements[i]
    t = math.tanh(theta)
    row: List[float] = []
    for j in range(i, len(placements)):
        h = placements[j]
        if not (g.vertices & h.vertices):
            row.append(1.0)
            continue
        u = u_coefficients(g, h)
        logv = n * math.log1p(u(t) / (f_cache[i](t) * f_cache[j](t)))
        row.append(math.inf if logv > LOG_OVERFLOW else math.exp(logv))
    return row


def chi_square_divergence(
    family: GraphFamily,
    d: int,
    theta: float,
    n: int,
    limit: int = 5_000,
    threads: int = 1,
) -> float:
    """
    χ² divergence between the uniform mixture over placements and the null:
    (1/|G*|^2) sum_{G,G'} chi_square_pair(G, G', θ, n) - 1.

    Rows of the pair matrix are computed in parallel; the final sum runs in a
    fixed order (math.fsum) so the result does not depend on `threads`.
    """
    if theta == 0.0:
        return 0.0
    placements = enumerate_placements(family, d, limit)
    f_cache = {i: f_poly(g) for i, g in enumerate(placements)}
    rows = parallel_map(
        _pair_row,
        [(i, placements, f_cache, theta, n) for i in range(len(placements))],
        threads=threads,
    )
    terms: List[float] = []
    for row in rows:
        terms.append(row[0])
        terms.extend(2.0 * v for v in row[1:])
    if any(math.isinf(v) for v in terms):
        return math.inf
    size = len(placements)
    return math.fsum(terms) / size**2 - 1.0


def chi_square_divergence_enumerated(family: GraphFamily, d: int, theta: float, n: int) -> float:
    """Mixture oracle over ({±1}^d)^n: 2^{dn} sum_X Pbar(X)^2 - 1."""
    if d * n > MAX_JOINT_BITS:
        raise SizeExceeded("d*n", d * n, MAX_JOINT_BITS)
    placements = enumerate_placements(family, d)
    mixture = np.zeros(1 << (d * n))
    for g in placements:
        p = pmf_table(IsingModel.from_graph(g, theta, high_temperature=False))
        mixture += reduce(np.kron, [p] * n)
    mixture /= len(placements)
    return float(2.0 ** (d * n) * np.sum(mixture**2) - 1.0)


def lecam_risk_lower_bound(divergence: float) -> float:
    """1 - sqrt(divergence)/2: lower bound on type-I + worst type-II error of any test."""
    if divergence < 0:
        raise BadInputs(f"divergence must be >= 0, got {divergence}")
    return 1.0 - 0.5 * math.sqrt(divergence)
