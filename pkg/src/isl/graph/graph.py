# src/isl/graph/graph.py
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from ..errors import GraphError

Edge = Tuple[int, int]


def _canonical_edges(d: int, edges: Iterable[Sequence[int]]) -> Tuple[Edge, ...]:
    out: List[Edge] = []
    seen = set()
    for raw in edges:
        if len(raw) != 2:
            raise GraphError(f"edge {tuple(raw)} must have exactly two endpoints")
        i, j = int(raw[0]), int(raw[1])
        if i == j:
            raise GraphError(f"self-loop ({i},{j}) is not allowed")
        if not (1 <= i <= d and 1 <= j <= d):
            raise GraphError(f"edge ({i},{j}) outside vertex range 1..{d}")
        e = (i, j) if i < j else (j, i)
        if e in seen:
            raise GraphError(f"duplicate edge {e}")
        seen.add(e)
        out.append(e)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph on vertices 1..d.

    Edges are stored sorted as (i, j) with i < j. V(G) (non-isolated vertices),
    the degree vector and the adjacency bitsets are computed once at construction.
    Bit (j-1) of adjacency_bits[i-1] is set iff (i, j) is an edge.
    """

    d: int
    edges: Tuple[Edge, ...] = ()
    vertices: FrozenSet[int] = field(init=False, repr=False, compare=False)
    degrees: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    adjacency_bits: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.d < 0:
            raise GraphError(f"vertex count must be >= 0, got {self.d}")
        edges = _canonical_edges(self.d, self.edges)
        bits = [0] * self.d
        deg = [0] * self.d
        for i, j in edges:
            bits[i - 1] |= 1 << (j - 1)
            bits[j - 1] |= 1 << (i - 1)
            deg[i - 1] += 1
            deg[j - 1] += 1
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency_bits", tuple(bits))
        object.__setattr__(self, "degrees", tuple(deg))
        object.__setattr__(self, "vertices", frozenset(v + 1 for v in range(self.d) if deg[v]))

    @classmethod
    def empty(cls, d: int) -> "Graph":
        return cls(d, ())

    @classmethod
    def complete(cls, d: int, on: Sequence[int] | None = None) -> "Graph":
        verts = sorted(on) if on is not None else list(range(1, d + 1))
        return cls(d, tuple((a, b) for x, a in enumerate(verts) for b in verts[x + 1 :]))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency_bits[i - 1] >> (j - 1) & 1)

    def neighbors(self, v: int) -> List[int]:
        bits = self.adjacency_bits[v - 1]
        return [j + 1 for j in range(self.d) if bits >> j & 1]

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.d, self.d), dtype=np.int64)
        for i, j in self.edges:
            a[i - 1, j - 1] = a[j - 1, i - 1] = 1
        return a

    def frobenius_norm(self) -> float:
        """‖A_G‖_F = sqrt(2|E|)."""
        return math.sqrt(2 * self.n_edges)

    def l1_norm(self) -> int:
        """ℓ1 operator norm of A_G: the maximum column sum, i.e. the max degree."""
        return max(self.degrees, default=0)

    def union(self, other: "Graph") -> "Graph":
        if other.d != self.d:
            raise GraphError(f"cannot union graphs with d={self.d} and d={other.d}")
        return Graph(self.d, tuple(self.edge_set | other.edge_set))

    def relabel(self, mapping: Mapping[int, int] | Sequence[int]) -> "Graph":
        """Apply a vertex permutation; a sequence maps vertex v to mapping[v-1]."""
        if not isinstance(mapping, Mapping):
            mapping = {v + 1: int(t) for v, t in enumerate(mapping)}
        return Graph(self.d, tuple((mapping.get(i, i), mapping.get(j, j)) for i, j in self.edges))

    def induced_edge_count(self, subset: Iterable[int]) -> int:
        mask = 0
        for v in subset:
            mask |= 1 << (v - 1)
        total = 0
        for v in range(self.d):
            if mask >> v & 1:
                total += bin(self.adjacency_bits[v] & mask).count("1")
        return total // 2

    # serialization: edge list text ("d" then "i j" lines) and JSON {d, edges}
    def to_edgelist(self) -> str:
        lines = [str(self.d)] + [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "Graph":
        rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        rows = [r for r in rows if r]
        if not rows:
            raise GraphError("edge list is empty; first line must hold d")
        try:
            d = int(rows[0])
            edges = [tuple(int(x) for x in r.split()) for r in rows[1:]]
        except ValueError as exc:
            raise GraphError(f"malformed edge list: {exc}") from exc
        return cls(d, tuple(edges))  # type: ignore[arg-type]

    def to_dict(self) -> Dict[str, object]:
        return {"d": self.d, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, payload: Mapping[str, object]) -> "Graph":
        if "d" not in payload or "edges" not in payload:
            raise GraphError("graph JSON needs fields 'd' and 'edges'")
        return cls(int(payload["d"]), tuple(tuple(e) for e in payload["edges"]))  # type: ignore

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class Multigraph:
    """Symmetric nonnegative integer multiplicity matrix with zero diagonal."""

    d: int
    adj: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in row) for row in self.adj)
        if len(rows) != self.d or any(len(r) != self.d for r in rows):
            raise GraphError(f"adjacency must be {self.d}x{self.d}")
        for i in range(self.d):
            if rows[i][i] != 0:
                raise GraphError(f"diagonal entry ({i + 1},{i + 1}) must be 0")
            for j in range(i + 1, self.d):
                if rows[i][j] != rows[j][i]:
                    raise GraphError(f"adjacency not symmetric at ({i + 1},{j + 1})")
                if rows[i][j] < 0:
                    raise GraphError(f"negative multiplicity at ({i + 1},{j + 1})")
        object.__setattr__(self, "adj", rows)

    @classmethod
    def from_graph(cls, g: Graph) -> "Multigraph":
        return cls.from_matrix(g.adjacency())

    @classmethod
    def from_matrix(cls, a: np.ndarray) -> "Multigraph":
        a = np.asarray(a)
        return cls(int(a.shape[0]), tuple(tuple(int(x) for x in row) for row in a))

    @classmethod
    def from_slots(cls, d: int, slots: Iterable[Tuple[Edge, int]]) -> "Multigraph":
        a = np.zeros((d, d), dtype=np.int64)
        for (i, j), m in slots:
            a[i - 1, j - 1] += m
            a[j - 1, i - 1] += m
        return cls.from_matrix(a)

    def __add__(self, other: "Multigraph") -> "Multigraph":
        return self.oplus(other)

    def oplus(self, other: "Multigraph") -> "Multigraph":
        """G ⊕ G': entrywise sum of adjacency matrices."""
        if other.d != self.d:
            raise GraphError(f"cannot add multigraphs with d={self.d} and d={other.d}")
        return Multigraph.from_matrix(self.matrix() + other.matrix())

    def matrix(self) -> np.ndarray:
        return np.array(self.adj, dtype=np.int64).reshape(self.d, self.d)

    def slots(self) -> List[Tuple[Edge, int]]:
        """Vertex pairs (i < j) with positive multiplicity, in lexicographic order."""
        return [
            ((i + 1, j + 1), self.adj[i][j])
            for i in range(self.d)
            for j in range(i + 1, self.d)
            if self.adj[i][j] > 0
        ]

    def copies(self) -> List[Edge]:
        """Edge list with one entry per parallel copy."""
        return [e for e, m in self.slots() for _ in range(m)]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.slots())

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(v for e, _ in self.slots() for v in e)

    def frobenius_norm(self) -> float:
        return float(np.sqrt((self.matrix() ** 2).sum()))

    def l1_norm(self) -> int:
        return int(self.matrix().sum(axis=0).max()) if self.d else 0
