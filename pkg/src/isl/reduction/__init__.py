# src/isl/reduction/__init__.py
from .certificate import (
    ReductionSamples,
    calibrate_reduction_constant,
    conditional_term_bound,
    end_to_end_reduction,
    exact_support_tv,
    hardness_frontier,
    reduction_certificate,
    two_sample_accuracy,
)
from .exact import (
    curie_weiss_pair_correlation,
    curie_weiss_pmf_by_count,
    curie_weiss_pmf_exact,
    expand_by_count,
    sign_pair_correlation,
    sign_pmf_by_count,
    sign_pmf_exact,
    tv_exact,
    tv_exchangeable,
)
from .spiked import ReductionParams, SpikedModel, sample_spiked, sign_reduce

__all__ = [
    "ReductionParams",
    "ReductionSamples",
    "SpikedModel",
    "calibrate_reduction_constant",
    "conditional_term_bound",
    "curie_weiss_pair_correlation",
    "curie_weiss_pmf_by_count",
    "curie_weiss_pmf_exact",
    "end_to_end_reduction",
    "exact_support_tv",
    "expand_by_count",
    "hardness_frontier",
    "reduction_certificate",
    "sample_spiked",
    "sign_pair_correlation",
    "sign_pmf_by_count",
    "sign_pmf_exact",
    "sign_reduce",
    "tv_exact",
    "tv_exchangeable",
    "two_sample_accuracy",
]
