import math
from itertools import combinations
from typing import List, Tuple

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.isl.errors import BadInputs, BadPlacement, GraphError, SizeExceeded, TooMany
from src.isl.graph import (
    Graph,
    GraphFamily,
    Multigraph,
    arboricity,
    build_pattern,
    densest_subset,
    enumerate_placements,
    family_arboricity,
    forest_partition,
    forest_partition_check,
    overlap_stats,
    pattern_norms,
    placement_count,
    witnessing_set,
)


@st.composite
def _graphs(draw: st.DrawFn, max_d: int = 9) -> Graph:
    d = draw(st.integers(min_value=2, max_value=max_d))
    pairs = list(combinations(range(1, d + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return Graph(d, tuple(chosen))


def _make_community(k: int, l: int) -> Graph:
    family = GraphFamily.community(k, l)
    return build_pattern(family, tuple(range(1, family.s + 1)), family.s)


def test_edges_are_canonical() -> None:
    g = Graph(4, ((3, 1), (2, 4)))
    assert g.edges == ((1, 3), (2, 4))
    assert g.vertices == frozenset({1, 2, 3, 4})
    assert g.has_edge(3, 1) and not g.has_edge(1, 2)


@pytest.mark.parametrize(
    "edges,match",
    [
        (((1, 1),), "self-loop"),
        (((1, 2), (2, 1)), "duplicate"),
        (((1, 5),), "outside vertex range"),
    ],
)
def test_bad_edges_rejected(edges: Tuple[Tuple[int, int], ...], match: str) -> None:
    with pytest.raises(GraphError, match=match):
        Graph(4, edges)


def test_edgelist_and_json_round_trip() -> None:
    g = Graph.complete(5, on=[1, 3, 5])
    assert Graph.from_edgelist(g.to_edgelist()) == g
    assert Graph.from_dict(g.to_dict()) == g


def test_multigraph_oplus_and_copies() -> None:
    g = Multigraph.from_graph(Graph(3, ((1, 2), (2, 3))))
    h = Multigraph.from_slots(3, [((1, 2), 2)])
    both = g + h
    assert both.slots() == [((1, 2), 3), ((2, 3), 1)]
    assert both.copies() == [(1, 2), (1, 2), (1, 2), (2, 3)]
    assert both.total_multiplicity == 4


def test_multigraph_rejects_asymmetric_matrix() -> None:
    with pytest.raises(GraphError, match="symmetric"):
        Multigraph(2, ((0, 1), (0, 0)))


def test_complete_five_has_arboricity_three() -> None:
    assert arboricity(Graph.complete(5)) == 3


def test_empty_graph_has_arboricity_zero() -> None:
    assert arboricity(Graph.empty(6)) == 0
    assert densest_subset(Graph.empty(6))[0] == frozenset()


@pytest.mark.parametrize("s", range(2, 11))
def test_clique_closed_form(s: int) -> None:
    family = GraphFamily.clique(s)
    expected = math.ceil(s / 2)
    assert family_arboricity(family) == expected
    assert arboricity(Graph.complete(s)) == expected


@pytest.mark.parametrize("s", [2, 3, 6])
def test_star_closed_form(s: int) -> None:
    family = GraphFamily.star(s)
    g = build_pattern(family, tuple(range(1, s + 1)), s)
    assert family_arboricity(family) == 1
    assert arboricity(g) == 1


@pytest.mark.parametrize("k", [4, 5, 6])
@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_community_closed_form(k: int, l: int) -> None:
    assert family_arboricity(GraphFamily.community(k, l)) == math.ceil(max(k, l) / 2)


@pytest.mark.parametrize("k,l", [(4, 2), (4, 3), (5, 2), (6, 2)])
def test_community_closed_form_matches_enumeration(k: int, l: int) -> None:
    assert arboricity(_make_community(k, l)) == math.ceil(max(k, l) / 2)


def test_arboricity_limit_raises() -> None:
    with pytest.raises(SizeExceeded):
        arboricity(Graph.complete(6), max_vertices=5)


@settings(max_examples=60, deadline=None)
@given(_graphs())
def test_arboricity_is_minimal_forest_partition(g: Graph) -> None:
    r = arboricity(g)
    assert forest_partition_check(g, r)
    if r >= 1:
        assert forest_partition(g, r - 1) is None


def test_densest_subset_of_clique_plus_pendant() -> None:
    k4 = [(a, b) for a, b in combinations(range(1, 5), 2)]
    g = Graph(5, tuple(k4) + ((4, 5),))
    subset, ratio = densest_subset(g)
    assert subset == frozenset({1, 2, 3, 4})
    assert ratio == 2


@pytest.mark.parametrize(
    "family,d,count",
    [
        (GraphFamily.single_edge(), 6, 15),
        (GraphFamily.clique(3), 6, 20),
        (GraphFamily.star(3), 5, 30),
        (GraphFamily.community(2, 2), 5, 15),
    ],
)
def test_placement_count_matches_enumeration(family: GraphFamily, d: int, count: int) -> None:
    assert placement_count(family, d) == count
    placements = enumerate_placements(family, d)
    assert len(placements) == count
    assert len({g.edges for g in placements}) == count


def test_enumeration_limit() -> None:
    with pytest.raises(TooMany):
        enumerate_placements(GraphFamily.clique(3), 12, limit=10)


def test_bad_placement() -> None:
    with pytest.raises(BadPlacement, match="duplicate"):
        build_pattern(GraphFamily.clique(3), (1, 1, 2), 4)


def test_family_needs_s_le_d() -> None:
    with pytest.raises(BadInputs, match="s <= d"):
        GraphFamily.clique(5).check_dimension(4)


def test_witnessing_set_for_triangles() -> None:
    ws = witnessing_set(GraphFamily.clique(3), 6)
    assert len(ws) == 20
    assert ws.R == 2
    assert ws.m == 3
    assert ws.Mcap == pytest.approx(math.log(20) / 3)
    assert ws.incidence().shape == (20, 15)


def test_overlap_stats_of_two_triangles() -> None:
    g = Graph(4, ((1, 2), (1, 3), (2, 3)))
    h = Graph(4, ((2, 3), (2, 4), (3, 4)))
    assert overlap_stats(g, h) == (2, 1, 2)


def test_pattern_norms() -> None:
    star: List[Tuple[int, int]] = [(1, j) for j in range(2, 6)]
    frob, l1 = pattern_norms(Graph(5, tuple(star)))
    assert frob == pytest.approx(math.sqrt(8))
    assert l1 == 4
