# src/isl/eulerian/polynomials.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from ..errors import BadInputs
from ..graph.graph import Graph, Multigraph
from .counting import MAX_MULTIPLICITY, CountVector, eulerian_counts

Number = Union[int, float]


def _trim(coeffs: Sequence[Number]) -> Tuple[Number, ...]:
    out = list(coeffs) or [0]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in t with coefficients in ascending degree.

    Integer coefficients stay exact; floats appear only when evaluating.
    """

    coeffs: Tuple[Number, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def from_counts(cls, counts: CountVector) -> "Polynomial":
        return cls(counts.counts)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Number:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return float(acc)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(k) - other.coeff(k) for k in range(n)))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))


def f_poly(g: Graph, limit: int = MAX_MULTIPLICITY) -> Polynomial:
    """f_G(t) = sum_k |E(k, G)| t^k = E0[prod_{(i,j)∈E}(1 + t X_i X_j)]."""
    return Polynomial.from_counts(eulerian_counts(Multigraph.from_graph(g), limit))


def f_pair_poly(g: Graph, h: Graph, limit: int = MAX_MULTIPLICITY) -> Polynomial:
    """f_{G,G'}(t): Eulerian counts of the multigraph G ⊕ G'."""
    if g.d != h.d:
        raise BadInputs(f"graphs must share d, got {g.d} and {h.d}")
    mg = Multigraph.from_graph(g) + Multigraph.from_graph(h)
    return Polynomial.from_counts(eulerian_counts(mg, limit))


def u_coefficients(g: Graph, h: Graph, limit: int = MAX_MULTIPLICITY) -> Polynomial:
    """f_{G,G'}(t) - f_G(t) f_{G'}(t); u_k = c_k - sum_{i+j=k} a_i b_j."""
    return f_pair_poly(g, h, limit) - f_poly(g, limit) * f_poly(h, limit)
