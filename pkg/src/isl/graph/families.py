# src/isl/graph/families.py
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

from ..errors import BadInputs, BadPlacement, TooMany
from ..utils.logger import get_logger
from .graph import Edge, Graph

logger = get_logger("Families")

FAMILY_TAGS = ("single_edge", "clique", "star", "community", "custom")
ENUMERABLE = ("single_edge", "clique", "star", "community")


@dataclass(frozen=True)
class GraphFamily:
    """
    Pattern family G*: the tag plus its size parameters.

    For community, s = k*l (l communities of k vertices). For custom, `pattern`
    lists edges on local vertices 1..s.
    """

    tag: str
    s: int = 2
    k: Optional[int] = None
    l: Optional[int] = None
    pattern: Tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.tag not in FAMILY_TAGS:
            raise BadInputs(f"unknown family tag {self.tag!r}; expected one of {FAMILY_TAGS}")
        if self.tag == "single_edge" and self.s != 2:
            raise BadInputs(f"single_edge has s=2, got s={self.s}")
        if self.tag in ("clique", "star") and self.s < 2:
            raise BadInputs(f"{self.tag} needs s >= 2, got s={self.s}")
        if self.tag == "community":
            if self.k is None or self.l is None or self.k < 1 or self.l < 1:
                raise BadInputs(f"community needs k >= 1 and l >= 1, got k={self.k}, l={self.l}")
            if self.s != self.k * self.l:
                raise BadInputs(f"community needs s = k*l, got s={self.s}, k={self.k}, l={self.l}")
        if self.tag == "custom":
            if not self.pattern:
                raise BadInputs("custom family needs a non-empty edge list")
            local = Graph(self.s, self.pattern)
            object.__setattr__(self, "pattern", local.edges)

    @classmethod
    def single_edge(cls) -> "GraphFamily":
        return cls("single_edge", 2)

    @classmethod
    def clique(cls, s: int) -> "GraphFamily":
        return cls("clique", s)

    @classmethod
    def star(cls, s: int) -> "GraphFamily":
        return cls("star", s)

    @classmethod
    def community(cls, k: int, l: int) -> "GraphFamily":
        return cls("community", k * l, k=k, l=l)

    @classmethod
    def custom(cls, edges: Sequence[Edge]) -> "GraphFamily":
        s = max(max(e) for e in edges)
        return cls("custom", s, pattern=tuple(edges))

    @classmethod
    def from_params(
        cls,
        tag: str,
        s: Optional[int] = None,
        k: Optional[int] = None,
        l: Optional[int] = None,
        pattern: Optional[Sequence[Edge]] = None,
    ) -> "GraphFamily":
        if tag == "single_edge":
            return cls.single_edge()
        if tag == "community":
            if k is None or l is None:
                raise BadInputs("community needs both k and l")
            return cls.community(k, l)
        if tag == "custom":
            return cls.custom(list(pattern or []))
        if s is None:
            raise BadInputs(f"{tag} needs s")
        return cls(tag, s)

    @property
    def label(self) -> str:
        if self.tag == "community":
            return f"community(k={self.k},l={self.l})"
        if self.tag == "single_edge":
            return "single_edge"
        return f"{self.tag}(s={self.s})"

    def check_dimension(self, d: int) -> None:
        if self.s > d:
            raise BadInputs(f"{self.label} needs s <= d, got s={self.s}, d={d}")

    def blocks(self, placement: Sequence[int]) -> List[Tuple[int, ...]]:
        k = self.k or 1
        return [tuple(placement[i * k : (i + 1) * k]) for i in range(self.l or 1)]


def _check_placement(family: GraphFamily, placement: Sequence[int], d: int) -> None:
    if len(placement) != family.s:
        raise BadPlacement(
            f"{family.label} needs {family.s} placement vertices, got {len(placement)}"
        )
    if len(set(placement)) != len(placement):
        raise BadPlacement(f"placement {list(placement)} has duplicate vertices")
    bad = [v for v in placement if not 1 <= v <= d]
    if bad:
        raise BadPlacement(f"placement vertices {bad} outside 1..{d}")


def build_pattern(
    family: GraphFamily,
    placement: Sequence[int],
    d: int,
    reps: Optional[Sequence[int]] = None,
) -> Graph:
    """
    Embed the family pattern on `placement`; every other vertex is isolated.

    star: placement[0] is the center. community: consecutive blocks of k
    vertices form the communities; `reps` picks one representative per block
    (default: the minimum-index vertex of each block) and the representatives
    are joined by a clique.
    """
    _check_placement(family, placement, d)
    p = [int(v) for v in placement]
    edges: List[Edge] = []

    if family.tag in ("single_edge", "clique"):
        edges = [(a, b) for x, a in enumerate(p) for b in p[x + 1 :]]
    elif family.tag == "star":
        edges = [(p[0], leaf) for leaf in p[1:]]
    elif family.tag == "community":
        blocks = family.blocks(p)
        if reps is None:
            chosen = [min(b) for b in blocks]
        else:
            chosen = [int(r) for r in reps]
            if len(chosen) != len(blocks):
                raise BadPlacement(f"need {len(blocks)} representatives, got {len(chosen)}")
            for r, b in zip(chosen, blocks):
                if r not in b:
                    raise BadPlacement(f"representative {r} is not in its block {list(b)}")
        for b in blocks:
            edges.extend((a, c) for x, a in enumerate(b) for c in b[x + 1 :])
        edges.extend((a, c) for x, a in enumerate(chosen) for c in chosen[x + 1 :])
    else:
        edges = [(p[i - 1], p[j - 1]) for i, j in family.pattern]

    return Graph(d, tuple(edges))


def placement_count(family: GraphFamily, d: int) -> int:
    """|G*|: number of distinct embedded copies produced by enumerate_placements."""
    if family.tag not in ENUMERABLE:
        raise BadInputs(f"placements are enumerable only for {ENUMERABLE}, not {family.tag}")
    family.check_dimension(d)
    s = family.s
    if family.tag in ("single_edge", "clique"):
        return math.comb(d, s)
    if family.tag == "star":
        return math.comb(d, 2) if s == 2 else s * math.comb(d, s)
    k, l = family.k or 1, family.l or 1
    if l == 1:
        return math.comb(d, k)
    if k == 1:
        return math.comb(d, l)
    ways = math.factorial(s) // (math.factorial(k) ** l * math.factorial(l))
    return math.comb(d, s) * ways


def _block_partitions(items: Tuple[int, ...], k: int) -> Iterator[List[Tuple[int, ...]]]:
    """Unordered partitions of sorted `items` into blocks of size k; each block starts
    with the smallest remaining element, giving lexicographic order."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for mates in combinations(rest, k - 1):
        block = (head,) + mates
        remaining = tuple(v for v in rest if v not in mates)
        for tail in _block_partitions(remaining, k):
            yield [block] + tail


def _iter_placements(family: GraphFamily, d: int) -> Iterator[Graph]:
    verts = range(1, d + 1)
    if family.tag in ("single_edge", "clique"):
        for combo in combinations(verts, family.s):
            yield build_pattern(family, combo, d)
    elif family.tag == "star":
        for combo in combinations(verts, family.s):
            centers = combo[:1] if family.s == 2 else combo
            for c in centers:
                yield build_pattern(family, (c,) + tuple(v for v in combo if v != c), d)
    else:
        k = family.k or 1
        for combo in combinations(verts, family.s):
            for blocks in _block_partitions(combo, k):
                yield build_pattern(family, [v for b in blocks for v in b], d)


def enumerate_placements(family: GraphFamily, d: int, limit: int = 100_000) -> List[Graph]:
    """All distinct embedded copies of the pattern, in deterministic lexicographic order."""
    count = placement_count(family, d)
    if count > limit:
        raise TooMany(f"placements of {family.label} at d={d}", count, limit)

    out: List[Graph] = []
    seen = set()
    for g in _iter_placements(family, d):
        if g.edges in seen:
            continue
        seen.add(g.edges)
        out.append(g)
    if len(out) != count:
        logger.warning(
            "Placement count mismatch for %s d=%d: enumerated %d, formula %d",
            family.label,
            d,
            len(out),
            count,
        )
    return out


def pattern_norms(g: Graph) -> Tuple[float, int]:
    """(‖A_G‖_F, ‖A_G‖_1) of one placement."""
    return g.frobenius_norm(), g.l1_norm()
