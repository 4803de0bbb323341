# src/isl/moments/combinatorics.py
"""
Exact integer combinatorics of Rademacher-sum moments.

P_{2m}(s) = E(X_1 + ... + X_s)^{2m} for i.i.d. Rademacher X_i is a degree-m
polynomial in s with integer coefficients a_k (coefficient of s^{m-k}),
generated by the tangent-number recursion

    P_{2m}(s) = sum_{k<m} (-1)^k C(2m-1, 2k+1) E_{2k+1} s P_{2m-2k-2}(s).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from ..errors import BadInputs
from ..utils.logger import get_logger

logger = get_logger("Moments")


@dataclass(frozen=True)
class TangentNumbers:
    """E_1, E_3, E_5, ...: tangent (zag) numbers, values[i] = E_{2i+1}."""

    values: Tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def odd(self, index: int) -> int:
        """E_index for odd index."""
        if index % 2 == 0 or index < 1:
            raise BadInputs(f"tangent numbers have odd index, got {index}")
        return self.values[(index - 1) // 2]


@lru_cache(maxsize=None)
def _zigzag(n_max: int) -> Tuple[int, ...]:
    """Euler zigzag numbers A_0..A_{n_max} from the Entringer (boustrophedon) triangle."""
    row = [1]
    out = [1]
    for n in range(1, n_max + 1):
        new = [0] * (n + 1)
        for k in range(1, n + 1):
            new[k] = new[k - 1] + row[n - k]
        row = new
        out.append(row[n])
    return tuple(out)


def tangent_numbers(order: int) -> TangentNumbers:
    """First `order` tangent numbers E_1, E_3, ..., E_{2 order - 1}."""
    if order < 0:
        raise BadInputs(f"order must be >= 0, got {order}")
    zz = _zigzag(max(2 * order - 1, 0))
    return TangentNumbers(tuple(zz[2 * i + 1] for i in range(order)))


@dataclass(frozen=True)
class MomentPolynomial:
    """P_{2m}(s) = sum_k coeffs[k] * s^(m-k), k = 0..m."""

    m: int
    coeffs: Tuple[int, ...]

    def __call__(self, s: int) -> int:
        return sum(a * s ** (self.m - k) for k, a in enumerate(self.coeffs))

    def partial(self, upto: int, s: int) -> int:
        """sum_{k <= upto} a_k s^(m-k)."""
        return sum(a * s ** (self.m - k) for k, a in enumerate(self.coeffs[: upto + 1]))

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def ascending(self) -> List[int]:
        """Coefficients by ascending power of s."""
        return list(reversed(self.coeffs))


@lru_cache(maxsize=None)
def _moment_ascending(m: int) -> Tuple[int, ...]:
    if m == 0:
        return (1,)
    tn = tangent_numbers(m)
    out = [0] * (m + 1)
    for k in range(m):
        c = (-1) ** k * math.comb(2 * m - 1, 2 * k + 1) * tn[k]
        # s * P_{2(m-k-1)}(s) shifts every power by one
        for power, a in enumerate(_moment_ascending(m - k - 1)):
            out[power + 1] += c * a
    return tuple(out)


def moment_poly(m: int) -> MomentPolynomial:
    if m < 0:
        raise BadInputs(f"m must be >= 0, got {m}")
    return MomentPolynomial(m, tuple(reversed(_moment_ascending(m))))


def moment_bruteforce(m: int, s: int) -> int:
    """E(2k - s)^{2m}, k ~ Bin(s, 1/2), as an exact rational (always an integer)."""
    if m < 0 or s < 0:
        raise BadInputs(f"need m >= 0 and s >= 0, got m={m}, s={s}")
    total = Fraction(sum(math.comb(s, k) * (2 * k - s) ** (2 * m) for k in range(s + 1)), 2**s)
    if total.denominator != 1:
        logger.error("Non-integer Rademacher moment m=%d s=%d: %s", m, s, total)
    return int(total)


def recursion_terms(m: int, s: int) -> List[int]:
    """The m summands of the tangent-number recursion evaluated at s."""
    tn = tangent_numbers(m)
    return [
        (-1) ** k * math.comb(2 * m - 1, 2 * k + 1) * tn[k] * s * moment_poly(m - k - 1)(s)
        for k in range(m)
    ]


def partial_sum_signs_check(m: int, s: int) -> bool:
    """Tails of the recursion starting at an odd index are <= 0, at an even index >= 0."""
    terms = recursion_terms(m, s)
    for start in range(m):
        tail = sum(terms[start:])
        if start % 2 == 1 and tail > 0:
            return False
        if start % 2 == 0 and tail < 0:
            return False
    return True


def truncation_bounds_check(m: int, s: int, l: int) -> bool:
    """
    sum_{k<=2l+1} a_k s^(m-k) <= P_{2m}(s) <= sum_{k<=2l} a_k s^(m-k).

    The coefficients alternate in sign starting with a_0 > 0, so truncating
    after an even index overshoots and after an odd index undershoots.
    """
    if l < 0:
        raise BadInputs(f"l must be >= 0, got {l}")
    poly = moment_poly(m)
    value = poly(s)
    return poly.partial(2 * l + 1, s) <= value <= poly.partial(2 * l, s)


def double_factorial(n: int) -> int:
    """n!! = n(n-2)(n-4)..., with 0!! = (-1)!! = 1."""
    if n <= 0:
        return 1
    return math.prod(range(n, 0, -2))


def a0_closed_form(m: int) -> int:
    return double_factorial(2 * m - 1)


def a1_closed_form(m: int) -> int:
    return -m * (m - 1) * double_factorial(2 * m - 1) // 3


@lru_cache(maxsize=None)
def a2_recursive(m: int) -> int:
    """
    a_2 via the recursion in m, with the double factorials read as odd ones:

        a2(m) = (2m-1) a2(m-1) + 2 C(2m-1,3)(m-2)(m-3)(2m-5)!!/3 + 16 C(2m-1,5)(2m-7)!!.
    """
    if m < 3:
        return 0
    middle = 2 * math.comb(2 * m - 1, 3) * (m - 2) * (m - 3) * double_factorial(2 * m - 5)
    return (
        (2 * m - 1) * a2_recursive(m - 1)
        + middle // 3
        + 16 * math.comb(2 * m - 1, 5) * double_factorial(2 * m - 7)
    )


def leading_coefficients(m: int) -> Tuple[int, int, int]:
    """(a0, a1, a2) read off moment_poly(m); cross-checked against the closed forms."""
    poly = moment_poly(m)
    a0, a1, a2 = poly.coeff(0), poly.coeff(1), poly.coeff(2)
    if m >= 1 and (a0 != a0_closed_form(m) or a1 != a1_closed_form(m)):
        logger.warning("Closed forms disagree at m=%d: a0=%d, a1=%d", m, a0, a1)
    if m >= 3 and a2 != a2_recursive(m):
        logger.warning("a2 recursion disagrees at m=%d: %d vs %d", m, a2, a2_recursive(m))
    return a0, a1, a2


def a2_bound_ratio(m: int) -> Fraction:
    """a2 / ((m-2)(m-1)m(m+1)(2m-1)!!); increasing in m with limit 1/18."""
    if m < 3:
        raise BadInputs(f"ratio defined for m >= 3, got {m}")
    den = (m - 2) * (m - 1) * m * (m + 1) * double_factorial(2 * m - 1)
    return Fraction(moment_poly(m).coeff(2), den)


def double_factorial_reading(m_max: int = 8) -> str:
    """Which double factorial equals the leading coefficient a0 for m = 1..m_max."""
    a0 = [moment_poly(m).coeff(0) for m in range(1, m_max + 1)]
    if all(a == double_factorial(2 * m - 1) for m, a in enumerate(a0, start=1)):
        return "odd"
    if all(a == double_factorial(2 * m) for m, a in enumerate(a0, start=1)):
        return "even"
    return "neither"
