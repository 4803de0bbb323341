# src/isl/eulerian/counting.py
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Tuple

from ..errors import BadInputs, SizeExceeded
from ..graph.graph import Edge, Multigraph
from ..utils.logger import get_logger

logger = get_logger("Eulerian")

MAX_MULTIPLICITY = 24
MAX_CYCLE_SPACE_DIM = MAX_MULTIPLICITY


@dataclass(frozen=True)
class CountVector:
    """counts[k] = number of k-edge Eulerian sub-multisets, k = 0..K."""

    counts: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.counts or self.counts[0] != 1:
            raise BadInputs("counts[0] must be 1 (the empty subgraph)")
        if any(c < 0 for c in self.counts):
            raise BadInputs("counts must be nonnegative")

    def __getitem__(self, k: int) -> int:
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def K(self) -> int:
        return len(self.counts) - 1


def _check_size(g: Multigraph, limit: int) -> None:
    total = g.total_multiplicity
    if total > limit:
        raise SizeExceeded("total edge multiplicity", total, limit)


def eulerian_counts(g: Multigraph, limit: int = MAX_MULTIPLICITY) -> CountVector:
    """
    Counts of even-degree edge sub-multisets by size, parallel copies distinct.

    Dynamic program over vertex pairs with state (odd-degree bitmask, size);
    a vertex whose pairs are all processed must be even, so states with its
    bit set are dropped.
    """
    _check_size(g, limit)
    slots = g.slots()
    last: Dict[int, int] = {}
    for t, ((i, j), _) in enumerate(slots):
        last[i] = t
        last[j] = t

    states: Dict[Tuple[int, int], int] = {(0, 0): 1}
    for t, ((i, j), m) in enumerate(slots):
        flip = (1 << (i - 1)) | (1 << (j - 1))
        done = 0
        for v, tv in last.items():
            if tv == t:
                done |= 1 << (v - 1)
        nxt: Dict[Tuple[int, int], int] = defaultdict(int)
        for (mask, k), c in states.items():
            for take in range(m + 1):
                mk = mask ^ flip if take % 2 else mask
                if mk & done:
                    continue
                nxt[(mk, k + take)] += c * math.comb(m, take)
        states = nxt

    total = g.total_multiplicity
    counts = [0] * (total + 1)
    for (mask, k), c in states.items():
        if mask == 0:
            counts[k] += c
    return CountVector(tuple(counts))


def count_eulerian(g: Multigraph, k: int, limit: int = MAX_MULTIPLICITY) -> int:
    """|E(k, G)|: k-edge subgraphs with every degree even (connectivity not required)."""
    if k < 0:
        raise BadInputs(f"k must be >= 0, got {k}")
    return eulerian_counts(g, limit)[k]


class CycleSpace:
    """
    GF(2) cycle space of the simple support of a multigraph.

    Every even-degree slot subset is a sum of fundamental cycles, so walking
    all 2^dim combinations in Gray-code order visits each exactly once. Masks
    index slots (distinct vertex pairs); parallel copies are counted in closed
    form by `_count_where`.
    """

    def __init__(
        self, g: Multigraph, limit: int = MAX_MULTIPLICITY, max_dim: int = MAX_CYCLE_SPACE_DIM
    ) -> None:
        _check_size(g, limit)
        slots = g.slots()
        self.edges: List[Edge] = [e for e, _ in slots]
        self.multiplicity: List[int] = [m for _, m in slots]
        self.max_dim = max_dim
        parent: Dict[int, int] = {}

        def find(v: int) -> int:
            parent.setdefault(v, v)
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        tree_adj: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
        non_tree: List[int] = []
        for idx, (a, b) in enumerate(self.edges):
            ra, rb = find(a), find(b)
            if ra == rb:
                non_tree.append(idx)
            else:
                parent[ra] = rb
                tree_adj[a].append((b, idx))
                tree_adj[b].append((a, idx))

        self.basis: List[int] = []
        for idx in non_tree:
            a, b = self.edges[idx]
            self.basis.append((1 << idx) | self._tree_path(tree_adj, a, b))
        if len(self.basis) > max_dim:
            raise SizeExceeded("cycle space dimension", len(self.basis), max_dim)

    @staticmethod
    def _tree_path(tree_adj: Dict[int, List[Tuple[int, int]]], a: int, b: int) -> int:
        # iterative DFS in the spanning forest; returns the edge mask of the a-b path
        stack = [(a, 0)]
        seen = {a}
        while stack:
            v, mask = stack.pop()
            if v == b:
                return mask
            for w, idx in tree_adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, mask | (1 << idx)))
        raise BadInputs(f"no tree path between {a} and {b}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def elements(self) -> Iterator[int]:
        """All even-degree slot subsets as bitmasks, the empty set first."""
        cur = 0
        yield cur
        for step in range(1, 1 << self.dim):
            low = (step & -step).bit_length() - 1
            cur ^= self.basis[low]
            yield cur

    def components(self, mask: int) -> List[Tuple[FrozenSet[int], int]]:
        """(vertex set, slot count) of each connected component of the slot subset `mask`."""
        parent: Dict[int, int] = {}

        def find(v: int) -> int:
            parent.setdefault(v, v)
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        used: List[Edge] = []
        m = mask
        while m:
            low = m & -m
            a, b = self.edges[low.bit_length() - 1]
            used.append((a, b))
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
            m ^= low
        groups: Dict[int, set] = defaultdict(set)
        sizes: Dict[int, int] = defaultdict(int)
        for a, b in used:
            r = find(a)
            groups[r].update((a, b))
            sizes[r] += 1
        return [(frozenset(vs), sizes[r]) for r, vs in groups.items()]


def _parity_polys(m: int) -> Tuple[List[int], List[int]]:
    """Copies taken from one slot: (odd counts, even counts >= 2) as coefficient lists."""
    odd = [math.comb(m, t) if t % 2 else 0 for t in range(m + 1)]
    even = [math.comb(m, t) if t % 2 == 0 and t >= 2 else 0 for t in range(m + 1)]
    return odd, even


def _coefficient(polys: List[List[int]], k: int) -> int:
    acc = [1] + [0] * k
    for poly in polys:
        nxt = [0] * (k + 1)
        for i, a in enumerate(acc):
            if a:
                for t, b in enumerate(poly[: k - i + 1]):
                    if b:
                        nxt[i + t] += a * b
        acc = nxt
    return acc[k]


def _count_where(
    g: Multigraph, k: int, keep: Callable[[List[Tuple[FrozenSet[int], int]]], bool], limit: int
) -> int:
    """
    Sum over slot supports S of [keep(components of S)] * #k-copy choices on S.

    Slots with an odd number of copies form an even-degree subset (a cycle
    space element); any slot of multiplicity >= 2 outside it may add an even
    positive number of copies.
    """
    space = CycleSpace(g, limit)
    mult = space.multiplicity
    heavy = [i for i, m in enumerate(mult) if m >= 2]
    if space.dim + len(heavy) > space.max_dim:
        raise SizeExceeded("support enumeration bits", space.dim + len(heavy), space.max_dim)
    polys = [_parity_polys(m) for m in mult]

    total = 0
    for odd in space.elements():
        free = [i for i in heavy if not odd >> i & 1]
        odd_slots = [i for i in range(len(mult)) if odd >> i & 1]
        for sub in range(1 << len(free)):
            even_slots = [i for b, i in enumerate(free) if sub >> b & 1]
            if not odd_slots and not even_slots:
                continue
            lo = len(odd_slots) + 2 * len(even_slots)
            hi = sum(mult[i] for i in odd_slots) + sum(mult[i] for i in even_slots)
            if not lo <= k <= hi:
                continue
            support = odd
            for i in even_slots:
                support |= 1 << i
            if not keep(space.components(support)):
                continue
            chosen = [polys[i][0] for i in odd_slots] + [polys[i][1] for i in even_slots]
            total += _coefficient(chosen, k)
    return total


def count_eulerian_connected(g: Multigraph, k: int, limit: int = MAX_MULTIPLICITY) -> int:
    """|E_c(k, G)|: k-edge Eulerian subgraphs forming a single connected component."""
    if k <= 0:
        return 0
    return _count_where(g, k, lambda comps: len(comps) == 1, limit)


def p_count(g: Multigraph, marked: Iterable[int], k: int, limit: int = MAX_MULTIPLICITY) -> int:
    """Connected k-edge Eulerian subgraphs containing at least two distinct marked vertices."""
    mk = frozenset(marked)
    if k <= 0:
        return 0
    return _count_where(g, k, lambda comps: len(comps) == 1 and len(comps[0][0] & mk) >= 2, limit)


def q_count(g: Multigraph, marked: Iterable[int], k: int, limit: int = MAX_MULTIPLICITY) -> int:
    """k-edge Eulerian subgraphs with some component holding two distinct marked vertices."""
    mk = frozenset(marked)
    if k <= 0:
        return 0
    return _count_where(g, k, lambda comps: any(len(vs & mk) >= 2 for vs, _ in comps), limit)


def p_bound(g: Multigraph, n_marked: int, k: int) -> float:
    """(k-1) |V|^2 ‖A‖_1^(k-2)."""
    return (k - 1) * n_marked**2 * float(g.l1_norm()) ** (k - 2)


def q_bound(g: Multigraph, n_marked: int, k: int) -> float:
    """min(2^k |V| ‖A‖_F^k, k 2^(k-2) |V|^2 (‖A‖_1 ∨ ‖A‖_F)^(k-2))."""
    fro, l1 = g.frobenius_norm(), float(g.l1_norm())
    first = 2.0**k * n_marked * fro**k
    second = k * 2.0 ** (k - 2) * n_marked**2 * max(l1, fro) ** (k - 2)
    return min(first, second)
