# src/isl/ising/samplers.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.special import expit

from ..errors import BadInputs, SizeExceeded
from ..utils.logger import get_logger
from .model import MAX_ENUM_D, IsingModel, pmf_table, spin_states

logger = get_logger("Samplers")

SAMPLER_TAGS = ("exact_enum", "gibbs", "curie_weiss_cond_iid", "sign_of_gaussian", "rademacher")
MAX_GIBBS_D = 10_000


@dataclass(frozen=True, eq=False)
class SampleMatrix:
    """n x d matrix of ±1 spins with the seed and sampler that produced it."""

    spins: np.ndarray
    seed: int
    sampler: str

    def __post_init__(self) -> None:
        x = np.asarray(self.spins)
        if x.ndim != 2:
            raise BadInputs(f"spins must be a 2-d array, got shape {x.shape}")
        if x.size and not np.all((x == 1) | (x == -1)):
            raise BadInputs("spins must only contain -1 and +1")
        if self.sampler not in SAMPLER_TAGS:
            raise BadInputs(f"unknown sampler tag {self.sampler!r}")
        x = x.astype(np.int8, copy=True)
        x.setflags(write=False)
        object.__setattr__(self, "spins", x)

    @property
    def n(self) -> int:
        return int(self.spins.shape[0])

    @property
    def d(self) -> int:
        return int(self.spins.shape[1])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.spins, columns=[f"x{i + 1}" for i in range(self.d)])

    def flipped(self) -> "SampleMatrix":
        return SampleMatrix(-self.spins, self.seed, self.sampler)

    def permuted(self, perm: np.ndarray) -> "SampleMatrix":
        """Columns reordered so that new column perm[i] holds old column i."""
        out = np.empty_like(self.spins)
        out[:, np.asarray(perm)] = self.spins
        return SampleMatrix(out, self.seed, self.sampler)


class AliasTable:
    """Vose alias table: O(1) draws from a fixed discrete distribution."""

    def __init__(self, p: np.ndarray) -> None:
        p = np.asarray(p, dtype=np.float64)
        k = p.size
        scaled = p * k / p.sum()
        self.prob = np.zeros(k)
        self.alias = np.zeros(k, dtype=np.int64)
        small = [i for i in range(k) if scaled[i] < 1.0]
        large = [i for i in range(k) if scaled[i] >= 1.0]
        while small and large:
            s, g = small.pop(), large.pop()
            self.prob[s] = scaled[s]
            self.alias[s] = g
            scaled[g] = scaled[g] + scaled[s] - 1.0
            (small if scaled[g] < 1.0 else large).append(g)
        for i in large + small:
            self.prob[i] = 1.0

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        cols = rng.integers(0, self.prob.size, size=n)
        keep = rng.random(n) < self.prob[cols]
        return np.where(keep, cols, self.alias[cols])


def draw_state_indices(p: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Alias table when n >= number of states, inverse CDF otherwise."""
    if n >= p.size:
        return AliasTable(p).draw(rng, n)
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    return np.searchsorted(cdf, rng.random(n), side="right")


def sample_exact(model: IsingModel, n: int, seed: int = 0) -> SampleMatrix:
    """n i.i.d. draws from pmf_exact via the enumerated state table."""
    if model.d > MAX_ENUM_D:
        raise SizeExceeded("d", model.d, MAX_ENUM_D)
    if n < 0:
        raise BadInputs(f"n must be >= 0, got {n}")
    rng = np.random.default_rng(seed)
    idx = draw_state_indices(pmf_table(model), n, rng)
    return SampleMatrix(spin_states(model.d)[idx], int(seed), "exact_enum")


def sample_null(d: int, n: int, seed: int = 0) -> SampleMatrix:
    """i.i.d. Rademacher spins (Θ = 0)."""
    rng = np.random.default_rng(seed)
    x = (2 * rng.integers(0, 2, size=(n, d), dtype=np.int8) - 1).astype(np.int8)
    return SampleMatrix(x, int(seed), "rademacher")


def gibbs_defaults(d: int, burn_in_per_d: int = 50, thin: int = 5) -> Tuple[int, int]:
    return burn_in_per_d * d, thin


def sample_gibbs(
    model: IsingModel,
    n: int,
    burn_in: Optional[int] = None,
    thin: Optional[int] = None,
    seed: int = 0,
    chains: int = 256,
) -> SampleMatrix:
    """
    Systematic-scan single-site Gibbs sampler.

    `chains` independent chains run side by side (vectorized); after `burn_in`
    sweeps each chain records one draw every `thin` sweeps. Row r of the output
    is draw r // chains of chain r % chains. The site update is
    P(X_i = 1 | rest) = sigmoid(2 sum_j theta_ij x_j).
    """
    d = model.d
    if d > MAX_GIBBS_D:
        raise SizeExceeded("d", d, MAX_GIBBS_D)
    b_default, t_default = gibbs_defaults(d)
    burn_in = b_default if burn_in is None else burn_in
    thin = t_default if thin is None else thin
    if burn_in < 1 or thin < 1:
        raise BadInputs(f"burn_in and thin must be >= 1, got {burn_in}, {thin}")
    if n < 1:
        raise BadInputs(f"n must be >= 1, got {n}")

    rng = np.random.default_rng(seed)
    c = max(1, min(chains, n))
    per_chain = -(-n // c)
    theta = model.theta
    x = (2 * rng.integers(0, 2, size=(c, d)) - 1).astype(np.float64)

    def sweep() -> None:
        for i in range(d):
            field_i = x @ theta[:, i]
            p = expit(2.0 * field_i)
            x[:, i] = np.where(rng.random(c) < p, 1.0, -1.0)

    for _ in range(burn_in):
        sweep()
    draws = np.empty((per_chain, c, d), dtype=np.int8)
    for t in range(per_chain):
        for _ in range(thin):
            sweep()
        draws[t] = x.astype(np.int8)
    logger.debug("Gibbs: d=%d chains=%d burn_in=%d thin=%d", d, c, burn_in, thin)
    return SampleMatrix(draws.reshape(-1, d)[:n], int(seed), "gibbs")
