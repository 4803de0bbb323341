# src/isl/scan/risk.py
"""
Monte Carlo estimates of the minimax risk of the scan test.

Seeding: the run seed is split with spawn_seeds into one child for the null
replicates and one child per (theta, alternative) task, so the estimate does
not depend on the number of worker threads. The null replicates are shared
by every theta of a curve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BadInputs
from ..graph.arboricity import family_arboricity
from ..graph.families import GraphFamily, enumerate_placements
from ..graph.graph import Graph
from ..graph.witnessing import WitnessingSet, witnessing_set
from ..ising.model import MAX_ENUM_D, IsingModel, pmf_table, spin_states
from ..ising.samplers import draw_state_indices, sample_gibbs
from ..utils.logger import get_logger
from ..utils.parallel import parallel_map, spawn_seeds
from .statistics import max_scan_statistics, scan_threshold

logger = get_logger("RiskCurve")

MAX_ALTERNATIVES = 2000
MIN_CALIBRATION_REPS = 100
DEFAULT_KAPPA_GRID = tuple(np.round(np.arange(0.0, 20.0 + 1e-9, 0.05), 10))


@dataclass(frozen=True)
class DetectionProblem:
    """One detection instance: null Θ = 0 against θ·A_G, G a placement of `family`."""

    family: GraphFamily
    d: int
    n: int
    theta: float = 0.0
    tag: str = ""

    def __post_init__(self) -> None:
        self.family.check_dimension(self.d)
        if self.n < 1:
            raise BadInputs(f"n must be >= 1, got {self.n}")
        if self.theta < 0:
            raise BadInputs(f"theta must be >= 0, got {self.theta}")

    @property
    def R(self) -> int:
        return family_arboricity(self.family)

    def with_theta(self, theta: float) -> "DetectionProblem":
        return DetectionProblem(self.family, self.d, self.n, theta, self.tag)

    def witnessing(self, limit: int = 100_000) -> WitnessingSet:
        return witnessing_set(self.family, self.d, limit)

    def model(self, g: Graph) -> IsingModel:
        return IsingModel.from_graph(g, self.theta, high_temperature=False)


@dataclass
class RiskEstimate:
    theta: float
    type_I: float
    worst_type_II: float
    reps: int
    se_type_I: float
    se_type_II: float
    kappa: float
    threshold: float
    worst_alternative: Optional[Tuple[Tuple[int, int], ...]] = None
    n_alternatives: int = 0
    subsampled: bool = False
    witness_size_ok: bool = True
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.type_I + self.worst_type_II

    @property
    def se(self) -> Tuple[float, float]:
        return self.se_type_I, self.se_type_II

    @property
    def se_total(self) -> float:
        return math.sqrt(self.se_type_I**2 + self.se_type_II**2)

    def to_row(self) -> Dict[str, Any]:
        return {
            "theta": self.theta,
            "type1": self.type_I,
            "type2_worst": self.worst_type_II,
            "total": self.total,
            "se_total": self.se_total,
            "kappa": self.kappa,
            "threshold": self.threshold,
        }


def _binomial_se(p: float, reps: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / reps)


def sample_replicates(
    model: Optional[IsingModel], d: int, n: int, reps: int, seed: int
) -> np.ndarray:
    """(reps, n, d) int8 stack of independent sample matrices."""
    rng = np.random.default_rng(seed)
    if model is None or not np.any(model.theta):
        return (2 * rng.integers(0, 2, size=(reps, n, d), dtype=np.int8) - 1).astype(np.int8)
    if d <= MAX_ENUM_D:
        idx = draw_state_indices(pmf_table(model), reps * n, rng)
        return spin_states(d)[idx].reshape(reps, n, d)
    logger.debug("d=%d beyond enumeration; using the Gibbs sampler", d)
    return sample_gibbs(model, reps * n, seed=seed).spins.reshape(reps, n, d)


def null_max_statistics(witnessing: WitnessingSet, n: int, reps: int, seed: int) -> np.ndarray:
    spins = sample_replicates(None, witnessing.d, n, reps, seed)
    return max_scan_statistics(spins, witnessing)


def calibrate_kappa(
    family: GraphFamily,
    d: int,
    n: int,
    alpha: float = 0.1,
    reps: int = 2000,
    seed: int = 0,
    grid: Optional[Sequence[float]] = None,
    witnessing: Optional[WitnessingSet] = None,
) -> float:
    """Smallest κ on the grid whose empirical null rejection rate is <= α/2."""
    if alpha <= 0.0:
        raise BadInputs(f"alpha must be > 0, got {alpha}")
    if reps < MIN_CALIBRATION_REPS:
        raise BadInputs(f"calibration needs reps >= {MIN_CALIBRATION_REPS}, got {reps}")
    if alpha >= 1.0:
        return 0.0
    ws = witnessing if witnessing is not None else witnessing_set(family, d)
    R = family_arboricity(family)
    top = null_max_statistics(ws, n, reps, spawn_seeds(seed, 1)[0])
    values = list(grid) if grid is not None else list(DEFAULT_KAPPA_GRID)
    for kappa in values:
        rate = float(np.mean(top > scan_threshold(kappa, ws.Mcap, R, n)))
        if rate <= alpha / 2:
            logger.info(
                "Calibrated kappa=%.4f for %s d=%d n=%d alpha=%.3f (null rate %.4f)",
                kappa,
                family.label,
                d,
                n,
                alpha,
                rate,
            )
            return float(kappa)
    logger.warning(
        "No kappa on the grid reaches null rate <= %.3f; using %.4f", alpha / 2, values[-1]
    )
    return float(values[-1])


def _alternatives(
    problem: DetectionProblem, max_alternatives: int, seed: int, limit: int
) -> Tuple[List[Graph], bool]:
    placements = enumerate_placements(problem.family, problem.d, limit)
    if len(placements) <= max_alternatives:
        return placements, False
    rng = np.random.default_rng(seed)
    pick = np.sort(rng.choice(len(placements), size=max_alternatives, replace=False))
    logger.warning(
        "Worst-case type-II over a seeded subset of %d of %d placements",
        max_alternatives,
        len(placements),
    )
    return [placements[i] for i in pick], True


def risk_curve(
    problem: DetectionProblem,
    thetas: Sequence[float],
    kappa: Optional[float] = None,
    alpha: float = 0.1,
    reps: int = 2000,
    seed: int = 0,
    max_alternatives: int = MAX_ALTERNATIVES,
    placement_limit: int = 100_000,
    threads: int = 1,
    progress: bool = False,
) -> List[RiskEstimate]:
    """
    For each θ: type-I from the shared null replicates and the worst type-II
    over the alternative placements, with binomial standard errors.
    """
    if reps < 1:
        raise BadInputs(f"reps must be >= 1, got {reps}")
    ws = problem.witnessing(placement_limit)
    R = problem.R
    n = problem.n
    root = spawn_seeds(seed, 4)
    if kappa is None:
        kappa = calibrate_kappa(
            problem.family,
            problem.d,
            n,
            alpha,
            max(reps, MIN_CALIBRATION_REPS),
            root[0],
            witnessing=ws,
        )
    threshold = scan_threshold(kappa, ws.Mcap, R, n)
    alternatives, subsampled = _alternatives(problem, max_alternatives, root[1], placement_limit)

    null_top = null_max_statistics(ws, n, reps, root[2])
    type_I = float(np.mean(null_top > threshold))

    tasks: List[Tuple[int, int, float, int]] = []
    for t_idx, (theta, theta_seed) in enumerate(zip(thetas, spawn_seeds(root[3], len(thetas)))):
        for a_idx, alt_seed in enumerate(spawn_seeds(theta_seed, len(alternatives))):
            tasks.append((t_idx, a_idx, float(theta), alt_seed))

    def run(task: Tuple[int, int, float, int]) -> float:
        _, a_idx, theta, alt_seed = task
        model = problem.with_theta(theta).model(alternatives[a_idx])
        spins = sample_replicates(model, problem.d, n, reps, alt_seed)
        return float(np.mean(max_scan_statistics(spins, ws) <= threshold))

    type_II = parallel_map(run, tasks, threads=threads, desc="risk-curve", progress=progress)

    per_theta: Dict[int, List[float]] = {}
    for (t_idx, _, _, _), value in zip(tasks, type_II):
        per_theta.setdefault(t_idx, []).append(value)

    witness_ok = len(ws) >= 2.0 / alpha
    out: List[RiskEstimate] = []
    for t_idx, theta in enumerate(thetas):
        values = per_theta.get(t_idx, [0.0])
        worst_idx = int(np.argmax(values))
        worst = values[worst_idx]
        out.append(
            RiskEstimate(
                theta=float(theta),
                type_I=type_I,
                worst_type_II=worst,
                reps=reps,
                se_type_I=_binomial_se(type_I, reps),
                se_type_II=_binomial_se(worst, reps),
                kappa=float(kappa),
                threshold=threshold,
                worst_alternative=alternatives[worst_idx].edges if alternatives else None,
                n_alternatives=len(alternatives),
                subsampled=subsampled,
                witness_size_ok=witness_ok,
            )
        )
    logger.info(
        "Risk curve for %s d=%d n=%d: %d thetas, %d alternatives, kappa=%.4f",
        problem.family.label,
        problem.d,
        n,
        len(thetas),
        len(alternatives),
        kappa,
    )
    return out
