from .adversary import (
    AdversaryReport,
    CoveringSets,
    adversarial_oracle,
    chi_square_lower_bound_check,
    covering_sets,
    placement_pmfs,
)
from .counting import (
    default_oracle_kappa,
    expected_overlap_bound,
    expected_overlap_enumerated,
    expected_overlap_greedy,
    oracle_threshold,
    overlap_counts,
    overlap_counts_enumerated,
    overlap_level,
    zeta,
    zeta_table,
)
from .queries import (
    OracleSession,
    Query,
    SQAlgorithm,
    constant_query,
    honest_oracle,
    oracle_coverage,
    oracle_tolerance,
    pair_query,
    pair_scan_algorithm,
    subgraph_psi1_null,
    subgraph_query,
)

__all__ = [
    "AdversaryReport",
    "CoveringSets",
    "OracleSession",
    "Query",
    "SQAlgorithm",
    "adversarial_oracle",
    "chi_square_lower_bound_check",
    "constant_query",
    "covering_sets",
    "default_oracle_kappa",
    "expected_overlap_bound",
    "expected_overlap_enumerated",
    "expected_overlap_greedy",
    "honest_oracle",
    "oracle_coverage",
    "oracle_threshold",
    "oracle_tolerance",
    "overlap_counts",
    "overlap_counts_enumerated",
    "overlap_level",
    "pair_query",
    "pair_scan_algorithm",
    "placement_pmfs",
    "subgraph_psi1_null",
    "subgraph_query",
    "zeta",
    "zeta_table",
]
