# src/isl/scan/__init__.py
from .risk import (
    DetectionProblem,
    RiskEstimate,
    calibrate_kappa,
    null_max_statistics,
    risk_curve,
    sample_replicates,
)
from .statistics import (
    ScanConfig,
    max_scan_statistics,
    pair_correlations,
    scan_statistics,
    scan_test,
    scan_threshold,
    w_statistic,
)
from .tails import mgf_exact, psi1_norm_exact, psi1_orlicz, psi1_tail_check, w_values

__all__ = [
    "DetectionProblem",
    "RiskEstimate",
    "ScanConfig",
    "calibrate_kappa",
    "max_scan_statistics",
    "mgf_exact",
    "null_max_statistics",
    "pair_correlations",
    "psi1_norm_exact",
    "psi1_orlicz",
    "psi1_tail_check",
    "risk_curve",
    "sample_replicates",
    "scan_statistics",
    "scan_test",
    "scan_threshold",
    "w_statistic",
    "w_values",
]
