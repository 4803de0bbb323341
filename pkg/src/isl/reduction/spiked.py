# src/isl/reduction/spiked.py
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import BadInputs, DomainError
from ..ising.samplers import SampleMatrix
from ..utils.logger import get_logger

logger = get_logger("SpikedModel")


@dataclass(frozen=True)
class SpikedModel:
    """N(0, I + sigma 1_I 1_I^T) on d coordinates; `support` holds 1-based indices."""

    d: int
    s: int
    sigma: float
    support: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise BadInputs(f"sigma must be >= 0, got {self.sigma}")
        if not 1 <= self.s <= self.d:
            raise BadInputs(f"need 1 <= s <= d, got s={self.s}, d={self.d}")
        support = tuple(sorted(int(v) for v in self.support)) or tuple(range(1, self.s + 1))
        if len(support) != self.s or len(set(support)) != self.s:
            raise BadInputs(f"support must list {self.s} distinct vertices, got {support}")
        if support[0] < 1 or support[-1] > self.d:
            raise BadInputs(f"support {support} outside 1..{self.d}")
        object.__setattr__(self, "support", support)

    def covariance(self) -> np.ndarray:
        cov = np.eye(self.d)
        idx = np.asarray(self.support) - 1
        cov[np.ix_(idx, idx)] += self.sigma
        return cov

    def restricted(self) -> "SpikedModel":
        """The same spike on its support only (d = s)."""
        return SpikedModel(self.s, self.s, self.sigma)


@dataclass(frozen=True)
class ReductionParams:
    """Ising clique coupling θ mapped to the spike σ = πθ/(1-2sθ)."""

    theta: float
    s: int

    def __post_init__(self) -> None:
        if self.theta < 0:
            raise BadInputs(f"theta must be >= 0, got {self.theta}")
        if self.s < 1:
            raise BadInputs(f"s must be >= 1, got {self.s}")
        if self.s * self.theta >= 0.5:
            raise DomainError(f"s*theta = {self.s * self.theta:.4f} must be < 1/2")

    @property
    def sigma(self) -> float:
        return math.pi * self.theta / (1.0 - 2.0 * self.s * self.theta)

    @property
    def kappa_const(self) -> float:
        return math.pi * self.theta


def sample_spiked(model: SpikedModel, n: int, seed: int = 0) -> np.ndarray:
    """n rows W = Z + sqrt(sigma) Y 1_I with Z ~ N(0, I), Y ~ N(0, 1) per row."""
    if n < 0:
        raise BadInputs(f"n must be >= 0, got {n}")
    rng = np.random.default_rng(seed)
    w = rng.standard_normal((n, model.d))
    y = rng.standard_normal(n)
    idx = np.asarray(model.support) - 1
    w[:, idx] += math.sqrt(model.sigma) * y[:, None]
    return w


def sign_reduce(w: np.ndarray, seed: Optional[int] = 0) -> SampleMatrix:
    """Entrywise sign with sign(0) = +1."""
    x = np.where(np.asarray(w) >= 0, 1, -1).astype(np.int8)
    return SampleMatrix(x, int(seed or 0), "sign_of_gaussian")
