# src/isl/graph/arboricity.py
from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..errors import BadInputs, SizeExceeded
from ..utils.logger import get_logger
from .families import GraphFamily
from .graph import Edge, Graph

logger = get_logger("Arboricity")

MAX_SUBSET_VERTICES = 24
MAX_PARTITION_D = 16


def family_arboricity(family: GraphFamily) -> int:
    """Closed-form arboricity of the family pattern."""
    if family.tag in ("single_edge", "star"):
        return 1
    if family.tag == "clique":
        return math.ceil(family.s / 2)
    if family.tag == "community":
        k, l = family.k or 1, family.l or 1
        if k == 1 and l == 1:
            return 0
        return math.ceil(max(k, l) / 2)
    # custom patterns have no closed form; evaluate on the local pattern graph
    return arboricity(Graph(family.s, family.pattern))


def _subset_tables(g: Graph, verts: List[int]) -> Tuple[np.ndarray, np.ndarray]:
    """Edge count and size of every subset of `verts`, indexed by bitmask.

    Built incrementally: subsets whose highest bit is b extend subsets of the
    lower b vertices by vertex b, adding its lower-indexed neighbors.
    """
    k = len(verts)
    pos = {v: x for x, v in enumerate(verts)}
    lower: List[List[int]] = [[] for _ in range(k)]
    for i, j in g.edges:
        a, b = pos[i], pos[j]
        lower[max(a, b)].append(min(a, b))

    edges = np.zeros(1 << k, dtype=np.int32)
    sizes = np.zeros(1 << k, dtype=np.int8)
    for b in range(k):
        half = 1 << b
        base = np.arange(half, dtype=np.uint32)
        add = np.zeros(half, dtype=np.int32)
        for j in lower[b]:
            add += ((base >> j) & 1).astype(np.int32)
        edges[half : 2 * half] = edges[:half] + add
        sizes[half : 2 * half] = sizes[:half] + 1
    return edges, sizes


def densest_subset(
    g: Graph, max_vertices: int = MAX_SUBSET_VERTICES
) -> Tuple[FrozenSet[int], Fraction]:
    """
    Vertex subset maximizing |E(G_V)|/(|V|-1) and the ratio itself (exact).

    Only non-isolated vertices are searched: isolated vertices never raise the ratio.
    Returns (empty set, 0) for the empty graph.
    """
    verts = sorted(g.vertices)
    if not verts:
        return frozenset(), Fraction(0)
    if len(verts) > max_vertices:
        raise SizeExceeded("non-isolated vertices", len(verts), max_vertices)

    edges, sizes = _subset_tables(g, verts)
    best = Fraction(0)
    best_mask = 0
    for t in range(2, len(verts) + 1):
        idx = np.flatnonzero(sizes == t)
        if idx.size == 0:
            continue
        pick = int(idx[np.argmax(edges[idx])])
        ratio = Fraction(int(edges[pick]), t - 1)
        if ratio > best:
            best, best_mask = ratio, pick
    subset = frozenset(v for x, v in enumerate(verts) if best_mask >> x & 1)
    return subset, best


def arboricity(
    g: Graph,
    family: Optional[GraphFamily] = None,
    max_vertices: int = MAX_SUBSET_VERTICES,
) -> int:
    """
    ceil(max_{|V|>=2} |E(G_V)|/(|V|-1)), 0 for the empty graph.

    When `family` is given its closed form is used; otherwise exact subset
    enumeration over the non-isolated vertices.
    """
    if family is not None and family.tag != "custom":
        return family_arboricity(family)
    if g.n_edges == 0:
        return 0
    _, ratio = densest_subset(g, max_vertices=max_vertices)
    return math.ceil(ratio)


def _forest_graph(d: int, edges: List[Edge]) -> nx.Graph:
    f = nx.Graph()
    f.add_nodes_from(range(1, d + 1))
    f.add_edges_from(edges)
    return f


def _insert_edge(forests: List[nx.Graph], where: Dict[Edge, int], e: Edge) -> bool:
    """Place e by a shortest exchange sequence across the forests (matroid partition)."""
    parent: Dict[Edge, Tuple[Edge, int]] = {}
    visited = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for i, f in enumerate(forests):
            if where.get(x) == i:
                continue
            u, v = x
            if not nx.has_path(f, u, v):
                # augment: x goes to forest i, then walk back through the displacements
                f.add_edge(u, v)
                where[x] = i
                y = x
                while y != e:
                    prev, slot = parent[y]
                    forests[slot].remove_edge(*y)
                    forests[slot].add_edge(*prev)
                    where[prev] = slot
                    y = prev
                return True
            path = nx.shortest_path(f, u, v)
            for a, b in zip(path, path[1:]):
                y = (a, b) if a < b else (b, a)
                if y not in visited:
                    visited.add(y)
                    parent[y] = (x, i)
                    queue.append(y)
    return False


def forest_partition(
    g: Graph, count: int, max_d: int = MAX_PARTITION_D
) -> Optional[List[List[Edge]]]:
    """Partition the edges into `count` forests, or None if impossible."""
    if g.d > max_d:
        raise SizeExceeded("d", g.d, max_d)
    if count < 0:
        raise BadInputs(f"forest count must be >= 0, got {count}")
    if g.n_edges == 0:
        return [[] for _ in range(count)]
    if count == 0:
        return None

    forests = [_forest_graph(g.d, []) for _ in range(count)]
    where: Dict[Edge, int] = {}
    for e in g.edges:
        if not _insert_edge(forests, where, e):
            return None
    return [sorted((min(a, b), max(a, b)) for a, b in f.edges()) for f in forests]


def forest_partition_check(g: Graph, count: int, max_d: int = MAX_PARTITION_D) -> bool:
    """True iff the edges split into `count` forests; each part is re-verified acyclic."""
    parts = forest_partition(g, count, max_d=max_d)
    if parts is None:
        return False
    covered = sorted(e for part in parts for e in part)
    if covered != list(g.edges):
        logger.error("Forest partition lost or duplicated edges for %s", g)
        return False
    return all(nx.is_forest(_forest_graph(g.d, part)) for part in parts)
