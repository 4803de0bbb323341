# src/isl/reduction/certificate.py
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.linear_model import LogisticRegression
from sklearn.model_selection import StratifiedKFold, cross_val_score
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import PolynomialFeatures

from ..errors import BadInputs
from ..ising.curie_weiss import CurieWeissParams, sample_curie_weiss
from ..ising.samplers import SampleMatrix
from ..moments.series import tv_bound_cwn_gaussian
from ..utils.logger import get_logger
from ..utils.parallel import spawn_seeds
from .exact import MAX_SIGN_S, curie_weiss_pmf_by_count, sign_pmf_by_count, tv_exchangeable
from .spiked import ReductionParams, SpikedModel, sample_spiked, sign_reduce

logger = get_logger("Reduction")


def conditional_term_bound(params: ReductionParams, n: int, C: float = 1.0) -> float:
    """C sqrt(n s κ³ / (1-2sθ)³), κ = πθ: the conditional-law term of the TV split."""
    q = 1.0 - 2.0 * params.s * params.theta
    return C * math.sqrt(n * params.s * params.kappa_const**3 / q**3)


def exact_support_tv(params: ReductionParams) -> float:
    """One-sample TV between sign(N(0, I + σ11^T)) and Curie-Weiss(s, θ) on the support."""
    sign = sign_pmf_by_count(params.sigma, params.s)
    cw = curie_weiss_pmf_by_count(CurieWeissParams(params.s, params.theta))
    return tv_exchangeable(sign, cw)


def _bounds(
    params: ReductionParams, n: int, tv_constant: float, reduction_constant: float
) -> Dict[str, float]:
    cwn = tv_bound_cwn_gaussian(params.theta, params.s, n, tv_constant)
    cond = conditional_term_bound(params, n, reduction_constant)
    return {"cwn_gaussian": cwn, "conditional": cond, "total": cwn + cond}


def reduction_certificate(
    params: ReductionParams,
    n: int,
    grid: Optional[Sequence[float]] = None,
    tv_constant: float = 1.0,
    reduction_constant: float = 1.0,
) -> Dict[str, Any]:
    """
    Both terms of TV(L(U), L(V)) <= TV(Y, Y') + E TV(conditionals), at n samples
    and per sample, next to the exact one-sample TV when s is small enough.

    `grid` is an optional list of θ values; the exact TV is tabulated over it and
    monotonicity in θ is reported (not enforced).
    """
    if n < 1:
        raise BadInputs(f"n must be >= 1, got {n}")
    bounds = _bounds(params, n, tv_constant, reduction_constant)
    per_sample = _bounds(params, 1, tv_constant, reduction_constant)

    exact: Optional[float] = None
    if params.s <= MAX_SIGN_S:
        exact = exact_support_tv(params)
    report: Dict[str, Any] = {
        "theta": params.theta,
        "s": params.s,
        "sigma": params.sigma,
        "kappa_const": params.kappa_const,
        "n": n,
        "constants": {"tv_cwn": tv_constant, "reduction_tv": reduction_constant},
        "bounds": bounds,
        "per_sample_bounds": per_sample,
        "exact_tv_support": exact,
        "n_sample_tv_upper": None if exact is None else min(1.0, n * exact),
        "exact_below_bound": None if exact is None else bool(exact <= per_sample["total"] + 1e-15),
    }

    if grid is not None and params.s <= MAX_SIGN_S:
        rows: List[Dict[str, float]] = []
        for theta in grid:
            p = ReductionParams(float(theta), params.s)
            rows.append({"theta": p.theta, "exact_tv": exact_support_tv(p)})
        values = [r["exact_tv"] for r in rows]
        ordered = sorted(zip([r["theta"] for r in rows], values))
        monotone = all(b >= a - 1e-14 for (_, a), (_, b) in zip(ordered, ordered[1:]))
        if not monotone:
            logger.warning("Exact support TV is not monotone in theta on the grid (s=%d)", params.s)
        report["grid"] = rows
        report["monotone_in_theta"] = monotone
    return report


def calibrate_reduction_constant(grid: Iterable[Tuple[int, float]]) -> float:
    """Smallest common constant making the per-sample bound dominate the exact TV on `grid`."""
    best = 0.0
    for s, theta in grid:
        if theta <= 0:
            continue
        p = ReductionParams(theta, s)
        total = _bounds(p, 1, 1.0, 1.0)["total"]
        best = max(best, exact_support_tv(p) / total)
    logger.info("Calibrated reduction TV constant: %.6f", best)
    return best


def hardness_frontier(n: int, s: int, eta: float = 1.0, delta: float = 0.0) -> Dict[str, float]:
    """θ ≍ η [n^{-(1/2+δ)} ∧ s^{-(1+δ)}]: the annotated computational frontier."""
    if n < 1 or s < 1:
        raise BadInputs(f"need n >= 1 and s >= 1, got n={n}, s={s}")
    if not eta > 0 or delta < 0:
        raise BadInputs(f"need eta > 0 and delta >= 0, got eta={eta}, delta={delta}")
    by_n = n ** -(0.5 + delta)
    by_s = s ** -(1.0 + delta)
    return {
        "n": n,
        "s": s,
        "eta": eta,
        "delta": delta,
        "theta_by_n": eta * by_n,
        "theta_by_s": eta * by_s,
        "theta_frontier": eta * min(by_n, by_s),
    }


@dataclass(frozen=True)
class ReductionSamples:
    pca: SampleMatrix
    ising: SampleMatrix
    support: Tuple[int, ...]
    params: ReductionParams


def end_to_end_reduction(
    theta: float,
    s: int,
    d: int,
    n: int,
    seed: int = 0,
    support: Optional[Sequence[int]] = None,
) -> ReductionSamples:
    """
    Sign-reduced spiked Gaussians with σ(θ) next to draws from the Ising clique
    on the same support (Curie-Weiss θ there, Rademacher elsewhere).
    """
    params = ReductionParams(theta, s)
    if s > d:
        raise BadInputs(f"need s <= d, got s={s}, d={d}")
    support_seed, gauss_seed, ising_seed, fill_seed = spawn_seeds(seed, 4)
    if support is None:
        rng = np.random.default_rng(support_seed)
        support = sorted(int(v) + 1 for v in rng.choice(d, size=s, replace=False))
    model = SpikedModel(d, s, params.sigma, tuple(support))

    pca = sign_reduce(sample_spiked(model, n, gauss_seed), seed=seed)

    clique = sample_curie_weiss(CurieWeissParams(s, theta), n, seed=ising_seed)
    rng = np.random.default_rng(fill_seed)
    spins = (2 * rng.integers(0, 2, size=(n, d), dtype=np.int8) - 1).astype(np.int8)
    spins[:, np.asarray(model.support) - 1] = clique.spins
    ising = SampleMatrix(spins, int(seed), "curie_weiss_cond_iid")
    logger.info(
        "Reduction samples: theta=%.4g sigma=%.4g s=%d d=%d n=%d support=%s",
        theta,
        params.sigma,
        s,
        d,
        n,
        list(model.support),
    )
    return ReductionSamples(pca, ising, model.support, params)


def two_sample_accuracy(a: SampleMatrix, b: SampleMatrix, seed: int = 0, folds: int = 5) -> float:
    """
    Cross-validated accuracy of a logistic classifier telling `a` rows from `b`
    rows, on the spins and their pairwise products. About 0.5 when the laws agree.
    """
    if a.d != b.d:
        raise BadInputs(f"sample sets disagree on d: {a.d} vs {b.d}")
    if min(a.n, b.n) < folds:
        raise BadInputs(f"need at least {folds} rows per sample set")
    x = np.vstack([a.spins, b.spins]).astype(np.float64)
    y = np.concatenate([np.zeros(a.n, dtype=int), np.ones(b.n, dtype=int)])
    clf = make_pipeline(
        PolynomialFeatures(degree=2, interaction_only=True, include_bias=False),
        LogisticRegression(C=1.0, max_iter=2000),
    )
    cv = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed % (2**32))
    scores = cross_val_score(clf, x, y, cv=cv, scoring="accuracy")
    return float(np.mean(scores))
