import math
from fractions import Fraction
from itertools import combinations
from typing import List, Tuple

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.isl.errors import BadInputs, SizeExceeded
from src.isl.eulerian import (
    CycleSpace,
    LowerBoundInputs,
    Polynomial,
    chi_square_divergence,
    chi_square_divergence_enumerated,
    chi_square_pair,
    chi_square_pair_enumerated,
    count_eulerian_connected,
    cross_term_bound,
    eulerian_counts,
    f_poly,
    lecam_risk_lower_bound,
    lower_bound_theta,
    mean_overlap,
    negative_association_bound,
    negative_association_lhs,
    p_bound,
    p_count,
    q_bound,
    q_count,
    u_coefficients,
    upper_bound_theta,
)
from src.isl.graph import Graph, GraphFamily, Multigraph, overlap_stats


@st.composite
def _multigraphs(draw: st.DrawFn) -> Multigraph:
    d = draw(st.integers(min_value=2, max_value=6))
    pairs = list(combinations(range(1, d + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    slots: List[Tuple[Tuple[int, int], int]] = []
    total = 0
    for e in chosen:
        m = draw(st.integers(min_value=1, max_value=3))
        if total + m > 12:
            break
        slots.append((e, m))
        total += m
    return Multigraph.from_slots(d, slots)


def _brute_force_counts(g: Multigraph) -> List[int]:
    copies = g.copies()
    counts = [0] * (len(copies) + 1)
    for mask in range(1 << len(copies)):
        deg = [0] * (g.d + 1)
        k = 0
        for idx, (a, b) in enumerate(copies):
            if mask >> idx & 1:
                deg[a] += 1
                deg[b] += 1
                k += 1
        if all(x % 2 == 0 for x in deg):
            counts[k] += 1
    return counts


def _triangle(a: int, b: int, c: int, d: int = 4) -> Graph:
    return Graph(d, ((a, b), (a, c), (b, c)))


@settings(max_examples=40, deadline=None)
@given(_multigraphs())
def test_counts_match_brute_force(g: Multigraph) -> None:
    assert list(eulerian_counts(g).counts) == _brute_force_counts(g)


def test_complete_four_counts() -> None:
    k4 = Multigraph.from_graph(Graph.complete(4))
    counts = eulerian_counts(k4)
    assert counts.K == 6
    assert counts[0] == 1
    assert counts[3] == 4
    assert counts[4] == 3
    assert counts[6] == 0
    assert count_eulerian_connected(k4, 3) == 4
    assert count_eulerian_connected(k4, 4) == 3
    assert count_eulerian_connected(k4, 0) == 0
    assert CycleSpace(k4).dim == 3


def test_parallel_copies_are_distinct() -> None:
    g = Multigraph.from_slots(2, [((1, 2), 3)])
    assert list(eulerian_counts(g).counts) == [1, 0, 3, 0]


def test_counting_limit() -> None:
    g = Multigraph.from_slots(3, [((1, 2), 20), ((2, 3), 10)])
    with pytest.raises(SizeExceeded):
        eulerian_counts(g)


def test_heavy_parallel_slot_at_the_input_limit() -> None:
    g = Multigraph.from_slots(2, [((1, 2), 24)])
    assert CycleSpace(g).dim == 0
    assert count_eulerian_connected(g, 2) == math.comb(24, 2)
    assert count_eulerian_connected(g, 24) == 1
    assert count_eulerian_connected(g, 3) == 0
    assert p_count(g, {1, 2}, 4) == math.comb(24, 4)
    assert q_count(g, {1, 2}, 24) == 1
    assert sum(count_eulerian_connected(g, k) for k in range(1, 25)) == 2**23 - 1


def _brute_force_connected(g: Multigraph, k: int) -> int:
    copies = g.copies()
    total = 0
    for chosen in combinations(range(len(copies)), k):
        deg = [0] * (g.d + 1)
        parent = list(range(g.d + 1))

        def find(v: int) -> int:
            while parent[v] != v:
                v = parent[v]
            return v

        for idx in chosen:
            a, b = copies[idx]
            deg[a] += 1
            deg[b] += 1
            parent[find(a)] = find(b)
        roots = {find(v) for v in range(1, g.d + 1) if deg[v]}
        if all(x % 2 == 0 for x in deg) and len(roots) == 1:
            total += 1
    return total


@settings(max_examples=25, deadline=None)
@given(_multigraphs(), st.integers(min_value=1, max_value=6))
def test_connected_counts_match_brute_force(g: Multigraph, k: int) -> None:
    assert count_eulerian_connected(g, k) == _brute_force_connected(g, k)


def test_marked_counts_within_bounds() -> None:
    k5 = Multigraph.from_graph(Graph.complete(5))
    for k in (3, 4, 5):
        p = p_count(k5, {1, 2}, k)
        q = q_count(k5, {1, 2}, k)
        assert p <= q
        assert p <= p_bound(k5, 2, k)
        assert q <= q_bound(k5, 2, k)
    assert p_count(k5, {1, 2}, 3) == 3


def test_polynomial_arithmetic() -> None:
    a = Polynomial((1, 2))
    b = Polynomial((1, 1))
    assert (a * b).coeffs == (1, 3, 2)
    assert (a - a).coeffs == (0,)
    assert (a + b)(2.0) == pytest.approx(7.0)


def test_u_coefficients_low_order() -> None:
    g = _triangle(1, 2, 3)
    h = _triangle(2, 3, 4)
    u = u_coefficients(g, h)
    _, shared_edges, delta = overlap_stats(g, h)
    assert u.coeff(0) == 0
    assert u.coeff(1) == 0
    assert u.coeff(2) == shared_edges
    assert u.coeff(3) == delta


def test_f_poly_of_triangle() -> None:
    assert f_poly(_triangle(1, 2, 3)).coeffs == (1, 0, 0, 1)


@pytest.mark.parametrize("theta", [0.05, 0.2, 0.4])
@pytest.mark.parametrize("n", [1, 3])
def test_pair_closed_form_matches_enumeration(theta: float, n: int) -> None:
    g = _triangle(1, 2, 3)
    h = _triangle(2, 3, 4)
    closed = chi_square_pair(g, h, theta, n)
    enumerated = chi_square_pair_enumerated(g, h, theta, n)
    assert closed == pytest.approx(enumerated, rel=1e-9)


def test_disjoint_pair_is_one() -> None:
    g = Graph(4, ((1, 2),))
    h = Graph(4, ((3, 4),))
    assert chi_square_pair(g, h, 0.3, 10) == 1.0


def test_divergence_zero_at_null() -> None:
    assert chi_square_divergence(GraphFamily.clique(3), 6, 0.0, 100) == 0.0


@pytest.mark.parametrize(
    "family,d,n", [(GraphFamily.single_edge(), 3, 2), (GraphFamily.clique(3), 4, 2)]
)
def test_divergence_matches_mixture_oracle(family: GraphFamily, d: int, n: int) -> None:
    closed = chi_square_divergence(family, d, 0.3, n)
    oracle = chi_square_divergence_enumerated(family, d, 0.3, n)
    assert closed == pytest.approx(oracle, rel=1e-9)


def test_divergence_is_thread_invariant() -> None:
    family = GraphFamily.clique(3)
    one = chi_square_divergence(family, 7, 0.15, 50, threads=1)
    four = chi_square_divergence(family, 7, 0.15, 50, threads=4)
    assert one == four


def test_mixture_oracle_limit() -> None:
    with pytest.raises(SizeExceeded):
        chi_square_divergence_enumerated(GraphFamily.single_edge(), 6, 0.1, 3)


def test_lecam_bound() -> None:
    assert lecam_risk_lower_bound(0.0) == 1.0
    assert lecam_risk_lower_bound(4.0) == 0.0
    with pytest.raises(BadInputs):
        lecam_risk_lower_bound(-0.1)


def test_mean_overlap_closed_form_matches_enumeration() -> None:
    family = GraphFamily.clique(3)
    assert mean_overlap(family, 8) == Fraction(9, 8)
    assert mean_overlap(family, 8, exact=True) == Fraction(9, 8)


def test_negative_association_holds() -> None:
    family = GraphFamily.clique(3)
    n, theta, d = 20, 0.05, 10
    N = float(mean_overlap(family, d))
    lhs = negative_association_lhs(family, d, 2, theta, n)
    assert lhs <= negative_association_bound(N, 2, theta, n)


def test_cross_term_bound() -> None:
    assert cross_term_bound(0, 2, 0.3) == 1.0
    assert cross_term_bound(2, 2, 0.1) == pytest.approx(1.12)
    with pytest.raises(BadInputs):
        cross_term_bound(-1, 2, 0.1)


def test_lower_bound_for_cliques() -> None:
    inputs = LowerBoundInputs.for_family(GraphFamily.clique(3), 100)
    assert inputs.R == 2
    assert inputs.N == pytest.approx(0.09)
    theta = lower_bound_theta(inputs, 1_000)
    assert 0.0 < theta <= 1.0 / (8.0 * max(inputs.Lambda, inputs.Gamma))
    expected = math.sqrt(math.log(1.0 / 0.09) / (6.0 * 1_000 * 2))
    assert theta <= expected + 1e-12
    assert set(inputs.to_dict()) == {"R", "Lambda", "Gamma", "Vmax", "N", "B"}


def test_lower_bound_needs_small_overlap() -> None:
    inputs = LowerBoundInputs.for_family(GraphFamily.clique(3), 6)
    with pytest.raises(BadInputs, match="mean overlap"):
        lower_bound_theta(inputs, 100)


def test_upper_bound_decreases_with_n() -> None:
    family = GraphFamily.star(4)
    assert upper_bound_theta(family, 50, 400) < upper_bound_theta(family, 50, 100)
    assert upper_bound_theta(GraphFamily.single_edge(), 50, 100, kappa=2.0) == pytest.approx(
        2.0 * math.sqrt(math.log(50) / 100)
    )
