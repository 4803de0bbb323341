# src/isl/ising/model.py
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from ..errors import BadInputs, SizeExceeded
from ..graph.graph import Graph

MAX_ENUM_D = 20
HIGH_TEMPERATURE_FROBENIUS = 0.5


@dataclass(frozen=True, eq=False)
class IsingModel:
    """
    Zero-field ferromagnetic Ising model, per-edge convention:

        P(x) ∝ exp( sum_{i<j} theta_ij x_i x_j ).

    `theta` is stored as a read-only symmetric float array with zero diagonal.
    With high_temperature=True the Frobenius norm is required to be <= 1/2.
    """

    d: int
    theta: np.ndarray
    high_temperature: bool = True
    key: bytes = field(init=False, repr=False)

    def __post_init__(self) -> None:
        th = np.array(self.theta, dtype=np.float64, copy=True)
        if th.shape != (self.d, self.d):
            raise BadInputs(f"theta must be {self.d}x{self.d}, got {th.shape}")
        if not np.allclose(th, th.T, atol=0.0, rtol=0.0):
            raise BadInputs("theta must be symmetric")
        if np.any(np.diag(th) != 0):
            raise BadInputs("theta must have a zero diagonal")
        if np.any(th < 0):
            raise BadInputs("theta must be nonnegative (ferromagnetic)")
        if self.high_temperature:
            fro = float(np.linalg.norm(th))
            if fro > HIGH_TEMPERATURE_FROBENIUS + 1e-12:
                raise BadInputs(
                    f"‖Θ‖_F = {fro:.4f} exceeds 1/2; pass high_temperature=False to allow it"
                )
        th.setflags(write=False)
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "key", th.tobytes())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IsingModel) and self.d == other.d and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.d, self.key))

    @classmethod
    def null(cls, d: int) -> "IsingModel":
        return cls(d, np.zeros((d, d)))

    @classmethod
    def from_graph(cls, g: Graph, theta: float, high_temperature: bool = True) -> "IsingModel":
        """Θ = θ·A_G."""
        if theta < 0:
            raise BadInputs(f"theta must be >= 0, got {theta}")
        return cls(g.d, theta * g.adjacency().astype(np.float64), high_temperature)

    @property
    def graph(self) -> Graph:
        iu = np.triu_indices(self.d, 1)
        mask = self.theta[iu] > 0
        pairs = zip(iu[0][mask], iu[1][mask])
        return Graph(self.d, tuple((int(i) + 1, int(j) + 1) for i, j in pairs))

    @property
    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.theta))

    def energy(self, states: np.ndarray) -> np.ndarray:
        """sum_{i<j} theta_ij x_i x_j for each row of `states`."""
        x = np.asarray(states, dtype=np.float64)
        return 0.5 * np.einsum("ni,ij,nj->n", x, self.theta, x)


def spin_states(d: int) -> np.ndarray:
    """All 2^d spin vectors as an int8 array; row r has x_i = +1 iff bit i of r is set."""
    if d > MAX_ENUM_D:
        raise SizeExceeded("d", d, MAX_ENUM_D)
    r = np.arange(1 << d, dtype=np.int64)[:, None]
    bits = (r >> np.arange(d, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def state_index(x: np.ndarray) -> np.ndarray:
    """Inverse of spin_states: row index of each spin vector."""
    x = np.atleast_2d(np.asarray(x))
    bits = (x > 0).astype(np.int64)
    return bits @ (1 << np.arange(x.shape[1], dtype=np.int64))


def _product_weights(theta: np.ndarray, states: np.ndarray) -> np.ndarray:
    d = theta.shape[0]
    w = np.ones(states.shape[0])
    iu, ju = np.triu_indices(d, 1)
    for i, j in zip(iu, ju):
        if theta[i, j] > 0:
            t = np.tanh(theta[i, j])
            w *= 1.0 + t * states[:, i] * states[:, j]
    return w


@lru_cache(maxsize=64)
def _cached_table(d: int, key: bytes, form: str) -> np.ndarray:
    theta = np.frombuffer(key, dtype=np.float64).reshape(d, d)
    states = spin_states(d)
    if form == "product":
        w = _product_weights(theta, states)
        table = w / w.sum()
    else:
        x = states.astype(np.float64)
        e = 0.5 * np.einsum("ni,ij,nj->n", x, theta, x)
        table = np.exp(e - logsumexp(e))
    table.setflags(write=False)
    return table


def pmf_table(
    model: IsingModel, form: Literal["product", "boltzmann"] = "product"
) -> np.ndarray:
    """Probabilities of all 2^d states (ordered as spin_states)."""
    if model.d > MAX_ENUM_D:
        raise SizeExceeded("d", model.d, MAX_ENUM_D)
    if form not in ("product", "boltzmann"):
        raise BadInputs(f"unknown pmf form {form!r}")
    return _cached_table(model.d, model.key, form)


def pmf_exact(model: IsingModel, x: np.ndarray) -> float:
    """
    prod_{(i,j)∈E}(1 + t_ij x_i x_j) / (2^d E0[prod(1 + t_ij X_i X_j)]), t_ij = tanh(theta_ij).
    """
    x = np.asarray(x)
    if x.shape != (model.d,) or not np.all(np.abs(x) == 1):
        raise BadInputs(f"x must be a ±1 vector of length {model.d}")
    return float(pmf_table(model)[int(state_index(x)[0])])


def log_partition(model: IsingModel) -> float:
    """log Z_Θ of the Boltzmann form."""
    x = spin_states(model.d).astype(np.float64)
    return float(logsumexp(model.energy(x)))


def pair_moments_exact(model: IsingModel) -> np.ndarray:
    """d x d matrix of E_Θ[X_i X_j] by enumeration (ones on the diagonal)."""
    p = pmf_table(model)
    x = spin_states(model.d).astype(np.float64)
    return (x * p[:, None]).T @ x


def expectation_exact(
    model: Optional[IsingModel], values: np.ndarray, d: Optional[int] = None
) -> float:
    """E[q(X)] for q given by its values on spin_states(d); model=None is the null."""
    if model is None:
        if d is None:
            raise BadInputs("d is required for the null expectation")
        return float(np.mean(values))
    return float(pmf_table(model) @ values)


def states_and_pmf(model: IsingModel) -> Tuple[np.ndarray, np.ndarray]:
    return spin_states(model.d), pmf_table(model)
