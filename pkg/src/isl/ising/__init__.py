# src/isl/ising/__init__.py
from .curie_weiss import (
    CurieWeissParams,
    curie_weiss_conditional_pmf,
    cw_to_edge_coupling,
    cwn_density,
    log_cwn_normalizer,
    sample_curie_weiss,
)
from .model import (
    IsingModel,
    log_partition,
    pair_moments_exact,
    pmf_exact,
    pmf_table,
    spin_states,
    state_index,
)
from .samplers import SampleMatrix, sample_exact, sample_gibbs, sample_null

__all__ = [
    "CurieWeissParams",
    "IsingModel",
    "SampleMatrix",
    "curie_weiss_conditional_pmf",
    "cw_to_edge_coupling",
    "cwn_density",
    "log_cwn_normalizer",
    "log_partition",
    "pair_moments_exact",
    "pmf_exact",
    "pmf_table",
    "sample_curie_weiss",
    "sample_exact",
    "sample_gibbs",
    "sample_null",
    "spin_states",
    "state_index",
]
