# src/isl/graph/witnessing.py
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Tuple

import numpy as np
from scipy import sparse

from ..errors import BadInputs
from ..utils.logger import get_logger
from .arboricity import family_arboricity
from .families import GraphFamily, enumerate_placements
from .graph import Graph

logger = get_logger("Witnessing")


def witness_ratio(h: Graph) -> int:
    """ceil(|E(H)| / (|V(H)|-1)), 0 for an empty H."""
    nv = len(h.vertices)
    if nv < 2:
        return 0
    return math.ceil(h.n_edges / (nv - 1))


@dataclass(frozen=True)
class WitnessingSet:
    """
    Search space of the scan test.

    m = min |V(H)| over members; Mcap = log|H| / m. Every member passes the
    witnessing predicate ceil(|E(H)|/(|V(H)|-1)) >= R.
    """

    members: Tuple[Graph, ...]
    R: int
    m: int = field(init=False)

    def __post_init__(self) -> None:
        if not self.members:
            raise BadInputs("witnessing set must have at least one member")
        ds = {h.d for h in self.members}
        if len(ds) != 1:
            raise BadInputs(f"witnessing members disagree on d: {sorted(ds)}")
        for h in self.members:
            if h.n_edges == 0:
                raise BadInputs("witnessing members need at least one edge")
            if witness_ratio(h) < self.R:
                raise BadInputs(
                    f"member {h.edges} has ratio {witness_ratio(h)} below arboricity {self.R}"
                )
        object.__setattr__(self, "m", min(len(h.vertices) for h in self.members))

    @property
    def d(self) -> int:
        return self.members[0].d

    @property
    def Mcap(self) -> float:
        return math.log(len(self.members)) / self.m

    def __len__(self) -> int:
        return len(self.members)

    def incidence(self) -> sparse.csr_matrix:
        """|H| x C(d,2) matrix with 1/|E(H)| on the pairs of each member.

        Pairs (i<j) are indexed row-major as in numpy.triu_indices(d, 1).
        """
        d = self.d
        iu = np.triu_indices(d, 1)
        index = {(int(i) + 1, int(j) + 1): x for x, (i, j) in enumerate(zip(*iu))}
        rows: List[int] = []
        cols: List[int] = []
        vals: List[float] = []
        for r, h in enumerate(self.members):
            w = 1.0 / h.n_edges
            for e in h.edges:
                rows.append(r)
                cols.append(index[e])
                vals.append(w)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(len(self.members), len(iu[0])))


def witnessing_set(family: GraphFamily, d: int, limit: int = 100_000) -> WitnessingSet:
    """
    Named witnessing set per family: single edges, s-cliques, (s-1)-stars,
    or (l v k)-cliques for community structure.
    """
    family.check_dimension(d)
    R = family_arboricity(family)
    if family.tag in ("single_edge", "clique", "star"):
        members = enumerate_placements(family, d, limit)
    elif family.tag == "community":
        size = max(family.k or 1, family.l or 1)
        if size < 2:
            raise BadInputs("community with k = l = 1 has no edges to witness")
        members = enumerate_placements(GraphFamily.clique(size), d, limit)
    else:
        raise BadInputs("witnessing sets are defined for single_edge, clique, star and community")
    ws = WitnessingSet(tuple(members), R)
    logger.info(
        "Witnessing set for %s at d=%d: |H|=%d m=%d M=%.4f", family.label, d, len(ws), ws.m, ws.Mcap
    )
    return ws


def overlap_stats(g: Graph, h: Graph) -> Tuple[int, int, int]:
    """
    (|V(g) ∩ V(h)|, |E(g) ∩ E(h)|, Δ) where Δ counts triangles of g ⊕ h that use
    at least one edge copy of g and one of h.
    """
    if g.d != h.d:
        raise BadInputs(f"overlap_stats needs equal d, got {g.d} and {h.d}")
    shared_v = len(g.vertices & h.vertices)
    shared_e = len(g.edge_set & h.edge_set)

    cross = 0
    verts = sorted(g.vertices | h.vertices)
    for a, b, c in combinations(verts, 3):
        pairs = ((a, b), (b, c), (a, c))
        mg = [int(g.has_edge(*p)) for p in pairs]
        mh = [int(h.has_edge(*p)) for p in pairs]
        total = math.prod(x + y for x, y in zip(mg, mh))
        if total:
            cross += total - math.prod(mg) - math.prod(mh)
    return shared_v, shared_e, cross
