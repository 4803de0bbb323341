# src/isl/scan/statistics.py
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BadInputs, EmptyWitness
from ..graph.graph import Graph
from ..graph.witnessing import WitnessingSet
from ..ising.samplers import SampleMatrix
from ..utils.logger import get_logger

logger = get_logger("ScanTest")


@dataclass(frozen=True)
class ScanConfig:
    """Scan test ψ over a witnessing set; rejects when max_H Ŵ_H > threshold."""

    witnessing: WitnessingSet
    kappa: float
    R: int
    n: int

    def __post_init__(self) -> None:
        if self.kappa < 0:
            raise BadInputs(f"kappa must be >= 0, got {self.kappa}")
        if self.R < 1:
            raise BadInputs(f"R must be >= 1, got {self.R}")
        if self.n < 1:
            raise BadInputs(f"n must be >= 1, got {self.n}")

    @property
    def threshold(self) -> float:
        """(κ/4) sqrt(M(H) / (R n))."""
        return scan_threshold(self.kappa, self.witnessing.Mcap, self.R, self.n)


def scan_threshold(kappa: float, Mcap: float, R: int, n: int) -> float:
    return 0.25 * kappa * math.sqrt(Mcap / (R * n))


def w_statistic(samples: SampleMatrix, h: Graph) -> float:
    """Ŵ_H = (1/n) sum_l (1/|E(H)|) sum_{(i,j)∈E(H)} X_li X_lj."""
    if h.n_edges == 0:
        raise EmptyWitness("witness graph has no edges")
    if h.d != samples.d:
        raise BadInputs(f"witness lives on d={h.d}, samples have d={samples.d}")
    if samples.n == 0:
        raise BadInputs("need at least one sample")
    x = samples.spins.astype(np.float64)
    i = np.array([e[0] - 1 for e in h.edges])
    j = np.array([e[1] - 1 for e in h.edges])
    return float(np.mean(x[:, i] * x[:, j]))


def pair_correlations(spins: np.ndarray) -> np.ndarray:
    """Upper-triangle sample correlations (1/n) sum_l X_li X_lj, in triu_indices order.

    Accepts one (n, d) matrix or a stack (reps, n, d); the last axis is pairs.
    """
    x = np.asarray(spins, dtype=np.float64)
    d = x.shape[-1]
    n = x.shape[-2]
    corr = np.einsum("...ni,...nj->...ij", x, x) / n
    iu = np.triu_indices(d, 1)
    return corr[..., iu[0], iu[1]]


def scan_statistics(samples: SampleMatrix, witnessing: WitnessingSet) -> np.ndarray:
    """Ŵ_H for every member H, in member order."""
    if witnessing.d != samples.d:
        raise BadInputs(f"witnessing set lives on d={witnessing.d}, samples have d={samples.d}")
    if samples.n == 0:
        raise BadInputs("need at least one sample")
    pairs = pair_correlations(samples.spins)
    return np.asarray(witnessing.incidence() @ pairs)


def max_scan_statistics(spins: np.ndarray, witnessing: WitnessingSet) -> np.ndarray:
    """max_H Ŵ_H for each replicate of a (reps, n, d) stack."""
    pairs = pair_correlations(spins)
    stats = witnessing.incidence() @ pairs.T
    return np.asarray(stats.max(axis=0)).ravel()


def scan_test(samples: SampleMatrix, cfg: ScanConfig) -> int:
    """1 iff max_H Ŵ_H > threshold (ties accept the null)."""
    top = float(np.max(scan_statistics(samples, cfg.witnessing)))
    return int(top > cfg.threshold)
