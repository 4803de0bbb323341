# src/isl/eulerian/lower_bound.py
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict

from ..errors import BadInputs
from ..graph.arboricity import family_arboricity
from ..graph.families import ENUMERABLE, GraphFamily, build_pattern, enumerate_placements
from ..utils.logger import get_logger

logger = get_logger("LowerBound")


@dataclass(frozen=True)
class LowerBoundInputs:
    """Pattern-family summaries entering the information lower bound."""

    R: int
    Lambda: float
    Gamma: float
    Vmax: int
    N: float

    def __post_init__(self) -> None:
        for name in ("R", "Lambda", "Gamma", "Vmax", "N"):
            value = getattr(self, name)
            if value < 0:
                raise BadInputs(f"{name} must be >= 0, got {value}")

    @property
    def B(self) -> float:
        big = max(self.Gamma, self.Lambda)
        return 512.0 * min(self.Lambda**4, self.Vmax * big**2)

    @classmethod
    def for_family(cls, family: GraphFamily, d: int) -> "LowerBoundInputs":
        family.check_dimension(d)
        g = build_pattern(family, tuple(range(1, family.s + 1)), d)
        return cls(
            R=family_arboricity(family),
            Lambda=g.frobenius_norm(),
            Gamma=float(g.l1_norm()),
            Vmax=len(g.vertices),
            N=float(mean_overlap(family, d)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": self.R,
            "Lambda": self.Lambda,
            "Gamma": self.Gamma,
            "Vmax": self.Vmax,
            "N": self.N,
            "B": self.B,
        }


def lower_bound_theta(inputs: LowerBoundInputs, n: int) -> float:
    """
    sqrt(log(1/N)/(6nR)) ∧ sqrt(R/B) ∧ 1/(8(Λ∨Γ)).

    Below this coupling no test separates the null from the family mixture
    asymptotically.
    """
    if not 0.0 < inputs.N < 1.0:
        raise BadInputs(f"mean overlap N must lie in (0, 1), got {inputs.N}")
    if inputs.R < 1:
        raise BadInputs(f"arboricity R must be >= 1, got {inputs.R}")
    if n < 1:
        raise BadInputs(f"n must be >= 1, got {n}")
    first = math.sqrt(math.log(1.0 / inputs.N) / (6.0 * n * inputs.R))
    second = math.sqrt(inputs.R / inputs.B)
    third = 1.0 / (8.0 * max(inputs.Lambda, inputs.Gamma))
    return min(first, second, third)


def mean_overlap(family: GraphFamily, d: int, exact: bool = False, limit: int = 5_000) -> Fraction:
    """
    N(G*) = max_G E_{G'~U(G*)} |V(G) ∩ V(G')|.

    Placements of one s-vertex pattern cover every s-subset equally often, so
    the closed form is s^2/d; `exact=True` averages over the enumeration instead.
    """
    family.check_dimension(d)
    if not exact or family.tag not in ENUMERABLE:
        return Fraction(family.s**2, d)

    placements = enumerate_placements(family, d, limit)
    vsets = [g.vertices for g in placements]
    size = len(vsets)
    best = Fraction(0)
    for v in vsets:
        total = sum(len(v & w) for w in vsets)
        best = max(best, Fraction(total, size))
    return best


def negative_association_bound(N: float, R: int, theta: float, n: int) -> float:
    """exp(N · exp(3nRθ²))."""
    if N <= 0:
        raise BadInputs(f"N must be > 0, got {N}")
    return math.exp(N * math.exp(3.0 * n * R * theta**2))


def negative_association_lhs(
    family: GraphFamily, d: int, R: int, theta: float, n: int, limit: int = 5_000
) -> float:
    """(1/|G*|²) Σ_{G,G'} exp(3nR|V(G)∩V(G')|θ²) by enumeration."""
    placements = enumerate_placements(family, d, limit)
    vsets = [g.vertices for g in placements]
    c = 3.0 * n * R * theta**2
    # only the overlap histogram matters
    hist: Dict[int, int] = {}
    for v in vsets:
        for w in vsets:
            m = len(v & w)
            hist[m] = hist.get(m, 0) + 1
    total = math.fsum(cnt * math.exp(c * m) for m, cnt in hist.items())
    return total / len(vsets) ** 2


def cross_term_bound(shared: int, R: int, theta: float) -> float:
    """1 + 3|V ∩ V'| R θ²: the per-sample likelihood cross term below the threshold."""
    if shared < 0:
        raise BadInputs(f"shared vertex count must be >= 0, got {shared}")
    return 1.0 + 3.0 * shared * R * theta**2


def upper_bound_theta(family: GraphFamily, d: int, n: int, kappa: float = 1.0) -> float:
    """Coupling above which the scan test succeeds, for the named families."""
    if n < 1:
        raise BadInputs(f"n must be >= 1, got {n}")
    family.check_dimension(d)
    s = family.s
    if family.tag == "single_edge":
        return kappa * math.sqrt(math.log(d) / n)
    if family.tag == "clique":
        return kappa * math.sqrt(math.log(math.e * d / s) / (s * n))
    if family.tag == "star":
        return kappa * math.sqrt(math.log(math.e * d / s) / n)
    if family.tag == "community":
        big = max(family.k or 1, family.l or 1)
        return kappa * math.sqrt(math.log(math.e * d / big) / (big * n))
    raise BadInputs(f"no scan threshold for family {family.tag!r}")
