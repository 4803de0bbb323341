# src/isl/graph/__init__.py
from .arboricity import (
    arboricity,
    densest_subset,
    family_arboricity,
    forest_partition,
    forest_partition_check,
)
from .families import (
    GraphFamily,
    build_pattern,
    enumerate_placements,
    pattern_norms,
    placement_count,
)
from .graph import Graph, Multigraph
from .witnessing import WitnessingSet, overlap_stats, witness_ratio, witnessing_set

__all__ = [
    "Graph",
    "Multigraph",
    "GraphFamily",
    "WitnessingSet",
    "arboricity",
    "build_pattern",
    "densest_subset",
    "enumerate_placements",
    "family_arboricity",
    "forest_partition",
    "forest_partition_check",
    "overlap_stats",
    "pattern_norms",
    "placement_count",
    "witness_ratio",
    "witnessing_set",
]
