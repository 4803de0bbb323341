# src/isl/sqoracle/adversary.py
"""
Worst-case oracle against a deterministic query algorithm.

G(q) holds the placements whose exact expectation of q differs from the null
one by more than psi1(q) * tau. If the algorithm only asks queries whose G(q)
misses some placement G0, answering E_{Θ0}[q] is admissible under both the
null and Θ0 = θA_{G0}; the transcript, and so the decision, is then the same
under both hypotheses and the total risk is exactly 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from ..errors import BadInputs, NoUncoveredGraph, SizeExceeded
from ..eulerian.chisquare import chi_square_pair
from ..graph.families import GraphFamily, enumerate_placements
from ..graph.graph import Graph
from ..ising.model import IsingModel, pmf_table
from ..utils.logger import get_logger
from .queries import OracleSession, Query, SQAlgorithm, oracle_tolerance

logger = get_logger("Adversary")

MAX_ADVERSARY_D = 12
DEFAULT_XI = 0.05


def placement_pmfs(placements: Sequence[Graph], theta: float) -> np.ndarray:
    """Row g is the state table of θA_g (no high-temperature restriction)."""
    if not placements:
        raise BadInputs("no placements given")
    d = placements[0].d
    if d > MAX_ADVERSARY_D:
        raise SizeExceeded("d", d, MAX_ADVERSARY_D)
    return np.stack(
        [pmf_table(IsingModel.from_graph(g, theta, high_temperature=False)) for g in placements]
    )


@dataclass(frozen=True)
class CoveringSets:
    """G+(q) and G-(q) per query id, as placement indices."""

    plus: Dict[str, FrozenSet[int]]
    minus: Dict[str, FrozenSet[int]]
    n_placements: int
    tau: float

    def covered(self, query_id: str) -> FrozenSet[int]:
        return self.plus[query_id] | self.minus[query_id]

    def sizes(self) -> Dict[str, int]:
        return {qid: len(self.covered(qid)) for qid in self.plus}

    @property
    def max_size(self) -> int:
        return max(self.sizes().values(), default=0)

    def union(self, query_ids: Sequence[str]) -> FrozenSet[int]:
        out: FrozenSet[int] = frozenset()
        for qid in query_ids:
            out = out | self.covered(qid)
        return out


def _expectations(queries: Sequence[Query], pmfs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    values = np.stack([q.values() for q in queries])
    if values.shape[1] != pmfs.shape[1]:
        raise BadInputs("queries and placements disagree on d")
    return pmfs @ values.T, values.mean(axis=1)


def covering_sets(
    queries: Sequence[Query], placements: Sequence[Graph], theta: float, tau: float
) -> CoveringSets:
    """Exact G±(q) = {G : ±(E_Θ q - E_0 q) > psi1(q) tau}."""
    pmfs = placement_pmfs(placements, theta)
    exp_alt, exp_null = _expectations(queries, pmfs)
    return _cover(queries, exp_alt, exp_null, tau)


def _cover(
    queries: Sequence[Query], exp_alt: np.ndarray, exp_null: np.ndarray, tau: float
) -> CoveringSets:
    if tau <= 0:
        raise BadInputs(f"tau must be > 0, got {tau}")
    plus: Dict[str, FrozenSet[int]] = {}
    minus: Dict[str, FrozenSet[int]] = {}
    for k, q in enumerate(queries):
        gap = exp_alt[:, k] - exp_null[k]
        band = q.psi1_null * tau
        plus[q.id] = frozenset(int(i) for i in np.flatnonzero(gap > band))
        minus[q.id] = frozenset(int(i) for i in np.flatnonzero(-gap > band))
    return CoveringSets(plus, minus, exp_alt.shape[0], tau)


@dataclass
class AdversaryReport:
    fooled_index: int
    fooled_placement: Graph
    decision: int
    transcript: List[Dict[str, Any]]
    tau: float
    n_placements: int
    covered_counts: Dict[str, int]
    covering_condition: bool
    band_ok: bool
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def type_I(self) -> float:
        return float(self.decision)

    @property
    def type_II(self) -> float:
        return 1.0 - float(self.decision)

    @property
    def risk(self) -> float:
        return self.type_I + self.type_II

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fooled_placement": self.fooled_placement.to_dict(),
            "fooled_index": self.fooled_index,
            "decision": self.decision,
            "type_I": self.type_I,
            "type_II": self.type_II,
            "risk": self.risk,
            "tau": self.tau,
            "n_placements": self.n_placements,
            "covered_counts": self.covered_counts,
            "covering_condition": self.covering_condition,
            "band_ok": self.band_ok,
            "transcript": self.transcript,
            **self.extra,
        }


def adversarial_oracle(
    family: GraphFamily,
    d: int,
    theta: float,
    algorithm: SQAlgorithm,
    n: int = 100,
    xi: float = DEFAULT_XI,
    limit: int = 100_000,
) -> AdversaryReport:
    """
    Run `algorithm` against the worst-case oracle.

    Candidates are tried in placement order, those left uncovered by the
    queries of a null-answer run first. A candidate G0 is accepted when every
    query asked while answering E_{Θ0}[q] leaves G0 uncovered. Raises
    NoUncoveredGraph (carrying the covering report) when no candidate works.
    """
    if d > MAX_ADVERSARY_D:
        raise SizeExceeded("d", d, MAX_ADVERSARY_D)
    if theta < 0:
        raise BadInputs(f"theta must be >= 0, got {theta}")
    placements = enumerate_placements(family, d, limit=limit)
    queries = list(algorithm.queries)
    sizing = OracleSession.for_queries(queries, xi, n)
    tau = sizing.tau
    pmfs = placement_pmfs(placements, theta)
    exp_alt, exp_null = _expectations(queries, pmfs)
    col = {q.id: k for k, q in enumerate(queries)}
    cover = _cover(queries, exp_alt, exp_null, tau)
    covering_condition = algorithm.budget * cover.max_size < len(placements)

    def answer_null(q: Query) -> float:
        if q.id not in col:
            raise BadInputs(f"algorithm asked {q.id}, which is outside its query space")
        return float(exp_null[col[q.id]])

    null_history, _ = algorithm.run(answer_null)
    null_cover = cover.union([q.id for q, _ in null_history])
    order = [i for i in range(len(placements)) if i not in null_cover]
    order += [i for i in range(len(placements)) if i in null_cover]

    for g0 in order:
        session = OracleSession.for_queries(queries, xi, n)

        def answer(q: Query, g0: int = g0, session: OracleSession = session) -> float:
            session.require(q)
            return session.record(q, float(exp_alt[g0, col[q.id]]))

        history, decision = algorithm.run(answer)
        asked = [q.id for q, _ in history]
        if g0 in cover.union(asked):
            continue
        band_ok = all(
            session.within_band(q, v, float(exp_null[col[q.id]]))
            and session.within_band(q, v, float(exp_alt[g0, col[q.id]]))
            for q, v in history
        )
        report = AdversaryReport(
            fooled_index=g0,
            fooled_placement=placements[g0],
            decision=decision,
            transcript=session.transcript,
            tau=tau,
            n_placements=len(placements),
            covered_counts=cover.sizes(),
            covering_condition=covering_condition,
            band_ok=band_ok,
            extra={"family": family.label, "d": d, "theta": theta, "n": n, "xi": xi},
        )
        logger.info(
            "Adversary fooled the algorithm with placement %s (decision %d, risk %.1f)",
            placements[g0].edges,
            decision,
            report.risk,
        )
        return report

    details = {
        "family": family.label,
        "d": d,
        "theta": theta,
        "tau": tau,
        "n_placements": len(placements),
        "covered_counts": cover.sizes(),
        "covering_condition": covering_condition,
    }
    logger.warning("Every placement is covered by the asked queries: %s", details)
    raise NoUncoveredGraph(
        f"all {len(placements)} placements of {family.label} are covered at tau={tau:.4g}",
        details,
    )


def chi_square_lower_bound_check(
    family: GraphFamily,
    d: int,
    theta: float,
    query: Query,
    n: int,
    xi: float = DEFAULT_XI,
    capacity: float = 0.0,
    limit: int = 100_000,
) -> Dict[str, Any]:
    """
    Averaged single-sample chi-square over G+(q):

        |G+|^{-2} sum_{G,G' in G+} E_0[(dP_Θ/dP_0)(dP_Θ'/dP_0)]  vs  1 + 1/n.

    Reported with the enumerated value of the same average and the
    Cauchy-Schwarz lower bound 1 + (mean gap)^2 / Var_0(q).
    """
    tau = oracle_tolerance(capacity, xi, n)
    placements = enumerate_placements(family, d, limit=limit)
    cover = covering_sets([query], placements, theta, tau)
    members = sorted(cover.plus[query.id])
    base: Dict[str, Any] = {
        "family": family.label,
        "d": d,
        "theta": theta,
        "n": n,
        "xi": xi,
        "capacity": capacity,
        "tau": tau,
        "query": query.id,
        "plus_size": len(members),
        "target": 1.0 + 1.0 / n,
    }
    if not members:
        return {**base, "applicable": False, "passed": True}

    chosen = [placements[i] for i in members]
    total = math.fsum(chi_square_pair(g, h, theta, 1) for g in chosen for h in chosen)
    averaged = total / len(chosen) ** 2

    pmfs = placement_pmfs(chosen, theta)
    mix = pmfs.mean(axis=0)
    enumerated = float(2.0**d * (mix @ mix))

    values = query.values()
    null = float(values.mean())
    var0 = float(values.var())
    gap = float(np.mean(pmfs @ values) - null)
    cs_bound = 1.0 + gap * gap / var0 if var0 > 0 else math.inf

    passed = averaged > base["target"]
    if not passed:
        logger.warning(
            "Averaged chi-square %.6g does not exceed %.6g for %s",
            averaged,
            base["target"],
            query.id,
        )
    return {
        **base,
        "applicable": True,
        "averaged": averaged,
        "averaged_enumerated": enumerated,
        "cauchy_schwarz_bound": cs_bound,
        "passed": passed,
    }
