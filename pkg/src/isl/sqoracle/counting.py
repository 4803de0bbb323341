# src/isl/sqoracle/counting.py
"""
Overlap counting for clique placements and the oracle-model threshold.

For s-cliques on d vertices, m_j is the number of placements sharing exactly
s - j vertices with a fixed one:  m_j = C(s, s-j) * C(d-s, j).
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Tuple

import pandas as pd

from ..errors import BadInputs, SizeExceeded
from ..utils.logger import get_logger

logger = get_logger("OverlapCounting")

MAX_ENUM_PLACEMENTS = 200_000


def _check_sd(s: int, d: int) -> None:
    if s < 1 or d < s:
        raise BadInputs(f"need 1 <= s <= d, got s={s}, d={d}")


def overlap_counts(s: int, d: int) -> List[int]:
    """[m_0, ..., m_s]; sums to C(d, s)."""
    _check_sd(s, d)
    return [math.comb(s, s - j) * math.comb(d - s, j) for j in range(s + 1)]


def overlap_counts_enumerated(s: int, d: int) -> List[int]:
    """
    max over placements G of #{G': |V(G) ∩ V(G')| = s - j}, by enumerating
    every pair of vertex sets.
    """
    _check_sd(s, d)
    total = math.comb(d, s)
    if total * total > MAX_ENUM_PLACEMENTS * 50:
        raise SizeExceeded("placement pairs", total * total, MAX_ENUM_PLACEMENTS * 50)
    sets = [frozenset(c) for c in combinations(range(1, d + 1), s)]
    best = [0] * (s + 1)
    for v in sets:
        row = [0] * (s + 1)
        for w in sets:
            row[s - len(v & w)] += 1
        best = [max(a, b) for a, b in zip(best, row)]
    return best


def zeta(s: int, d: int) -> Fraction:
    """min_j m_{j+1} / m_j over j = 0..s-1 (needs d >= 2s so every m_j > 0)."""
    _check_sd(s, d)
    if d < 2 * s:
        raise BadInputs(f"zeta needs d >= 2s, got s={s}, d={d}")
    m = overlap_counts(s, d)
    return min(Fraction(m[j + 1], m[j]) for j in range(s))


def zeta_table(grid: Iterable[Tuple[int, int]]) -> pd.DataFrame:
    """zeta next to d/s^2 for each (s, d); the ratio tends to 1 as d/s grows."""
    rows = []
    for s, d in grid:
        z = zeta(s, d)
        ref = Fraction(d, s * s)
        rows.append(
            {
                "s": s,
                "d": d,
                "zeta": float(z),
                "closed_form": float(Fraction(d - 2 * s + 1, s * s)),
                "d_over_s2": float(ref),
                "ratio": float(z / ref),
            }
        )
    return pd.DataFrame(rows)


def overlap_level(s: int, d: int, k: int) -> int:
    """l(k) = max{r <= s : m_0 + ... + m_r <= k}."""
    m = overlap_counts(s, d)
    if not 1 <= k <= sum(m):
        raise BadInputs(f"k must lie in 1..C(d,s)={sum(m)}, got {k}")
    acc = 0
    level = -1
    for r, mr in enumerate(m):
        acc += mr
        if acc > k:
            break
        level = r
    return level


def expected_overlap_bound(s: int, d: int, k: int) -> Fraction:
    """
    Upper bound on sup_G sup_{|𝒢|=k} E_{G'~U(𝒢)} |V(G) ∩ V(G')|^2:

        sum_{j<=l(k)} (s-j)^2 m_j / sum_{j<=l(k)} m_j.
    """
    m = overlap_counts(s, d)
    level = overlap_level(s, d, k)
    num = sum((s - j) ** 2 * m[j] for j in range(level + 1))
    den = sum(m[j] for j in range(level + 1))
    return Fraction(num, den)


def expected_overlap_greedy(s: int, d: int, k: int) -> Fraction:
    """The exact supremum: average of the k largest squared overlaps with a fixed G."""
    m = overlap_counts(s, d)
    level = overlap_level(s, d, k)
    used = sum(m[: level + 1])
    num = sum((s - j) ** 2 * m[j] for j in range(level + 1))
    if level + 1 <= s:
        num += (s - level - 1) ** 2 * (k - used)
    return Fraction(num, k)


def expected_overlap_enumerated(s: int, d: int, k: int) -> Fraction:
    """Top-k average of squared overlaps with the placement on 1..s, by enumeration."""
    _check_sd(s, d)
    if math.comb(d, s) > MAX_ENUM_PLACEMENTS:
        raise SizeExceeded("placements", math.comb(d, s), MAX_ENUM_PLACEMENTS)
    base = frozenset(range(1, s + 1))
    sq = sorted(
        (len(base & frozenset(c)) ** 2 for c in combinations(range(1, d + 1), s)), reverse=True
    )
    if not 1 <= k <= len(sq):
        raise BadInputs(f"k must lie in 1..{len(sq)}, got {k}")
    return Fraction(sum(sq[:k]), k)


def default_oracle_kappa(p: float, eta: float) -> float:
    """
    kappa = 1 / (sqrt(2) (2 + p/eta)) for a budget T <= d^p and s <= d^((1-eta)/2).
    """
    if not p > 0:
        raise BadInputs(f"oracle p must be > 0, got {p}")
    if not 0 < eta <= 1:
        raise BadInputs(f"oracle eta must lie in (0, 1], got {eta}")
    return 1.0 / (math.sqrt(2.0) * (2.0 + p / eta))


def oracle_threshold(
    s: int,
    d: int,
    n: int,
    budget: int,
    kappa: Optional[float] = None,
    p: float = 1.0,
    eta: float = 0.5,
) -> float:
    """
    kappa * sqrt(1/n) ∧ 1/(16 s). Without an explicit kappa the default comes
    from (p, eta); a budget above d^p is logged, not rejected.
    """
    _check_sd(s, d)
    if n < 1:
        raise BadInputs(f"n must be >= 1, got {n}")
    if budget > d**p:
        logger.warning("Query budget %d exceeds d^p = %.1f (p=%.3f)", budget, d**p, p)
    k = default_oracle_kappa(p, eta) if kappa is None else kappa
    if k <= 0:
        raise BadInputs(f"kappa must be > 0, got {k}")
    return min(k / math.sqrt(n), 1.0 / (16.0 * s))
