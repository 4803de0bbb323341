# src/isl/sqoracle/queries.py
"""
Statistical query oracles over {±1}^d.

A query maps spin vectors to reals. The oracle for a finite query space Q
with sample size n and tail probability xi answers within psi1 * tau of the
true expectation, where

    t   = (log|Q| + log(1/xi)) / n
    tau = max(t, sqrt(2 t)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BadInputs, EmptyWitness
from ..graph.graph import Graph
from ..ising.model import MAX_ENUM_D, IsingModel, pmf_table, spin_states
from ..ising.samplers import draw_state_indices, sample_exact, sample_null
from ..scan.tails import psi1_norm_exact, w_values
from ..utils.logger import get_logger
from ..utils.parallel import parallel_map, spawn_seeds

logger = get_logger("SQOracle")

# moment-form psi1 norm of a single Rademacher product
PAIR_PSI1 = 1.0

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Query:
    """
    q: {±1}^d -> R, evaluated row-wise on an (n, d) spin array.

    `constant` is set for constant queries so oracles can answer them exactly.
    """

    id: str
    d: int
    evaluator: Evaluator = field(repr=False, compare=False)
    psi1_null: float
    constant: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise BadInputs("query id must be non-empty")
        if self.d < 1:
            raise BadInputs(f"query dimension must be >= 1, got {self.d}")
        if not self.psi1_null > 0 or not math.isfinite(self.psi1_null):
            raise BadInputs(f"psi1_null must be a positive finite number, got {self.psi1_null}")

    def __call__(self, spins: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(spins))
        if x.shape[1] != self.d:
            raise BadInputs(f"query {self.id} expects d={self.d}, got {x.shape[1]}")
        return np.asarray(self.evaluator(x), dtype=np.float64).reshape(x.shape[0])

    def values(self) -> np.ndarray:
        """q on every state of spin_states(d)."""
        return self(spin_states(self.d))


def _pair_eval(i: int, j: int, x: np.ndarray) -> np.ndarray:
    return x[:, i].astype(np.float64) * x[:, j]


def _subgraph_eval(h: Graph, x: np.ndarray) -> np.ndarray:
    return w_values(h, x)


def _constant_eval(c: float, x: np.ndarray) -> np.ndarray:
    return np.full(x.shape[0], c, dtype=np.float64)


def pair_query(i: int, j: int, d: int, psi1_null: Optional[float] = None) -> Query:
    """q(x) = x_i x_j (1-based vertices)."""
    if not (1 <= i <= d and 1 <= j <= d) or i == j:
        raise BadInputs(f"pair ({i}, {j}) is not a valid pair of distinct vertices in 1..{d}")
    a, b = min(i, j), max(i, j)
    return Query(
        id=f"pair:{a}-{b}",
        d=d,
        evaluator=partial(_pair_eval, a - 1, b - 1),
        psi1_null=PAIR_PSI1 if psi1_null is None else psi1_null,
    )


def _compact(h: Graph) -> Graph:
    verts = sorted(h.vertices)
    pos = {v: x + 1 for x, v in enumerate(verts)}
    return Graph(len(verts), tuple((pos[i], pos[j]) for i, j in h.edges))


def subgraph_psi1_null(h: Graph, constant: float = PAIR_PSI1) -> float:
    """
    Null psi1 norm of W_H.

    Exact by enumeration over the vertices H touches when there are at most
    MAX_ENUM_D of them, otherwise constant * |E(H)|^(-1/2).
    """
    if h.n_edges == 0:
        raise EmptyWitness("query graph has no edges")
    small = _compact(h)
    if small.d <= MAX_ENUM_D:
        return psi1_norm_exact(IsingModel.null(small.d), small)
    return constant / math.sqrt(h.n_edges)


def subgraph_query(h: Graph, psi1_null: Optional[float] = None) -> Query:
    """q(x) = W_H(x), the average of x_i x_j over the edges of H."""
    if h.n_edges == 0:
        raise EmptyWitness("query graph has no edges")
    label = ",".join(f"{i}-{j}" for i, j in h.edges)
    return Query(
        id=f"subgraph:{label}",
        d=h.d,
        evaluator=partial(_subgraph_eval, h),
        psi1_null=subgraph_psi1_null(h) if psi1_null is None else psi1_null,
    )


def constant_query(c: float, d: int) -> Query:
    """q ≡ c. Its psi1 norm is |c|/log 2; c = 0 uses 1."""
    psi1 = abs(c) / math.log(2.0) if c != 0 else 1.0
    return Query(
        id=f"const:{c!r}",
        d=d,
        evaluator=partial(_constant_eval, float(c)),
        psi1_null=psi1,
        constant=float(c),
    )


def oracle_tolerance(capacity: float, xi: float, n: int) -> float:
    if n < 1:
        raise BadInputs(f"n must be >= 1, got {n}")
    if not 0 < xi < 1:
        raise BadInputs(f"xi must lie in (0, 1), got {xi}")
    if capacity < 0:
        raise BadInputs(f"capacity must be >= 0, got {capacity}")
    t = (capacity + math.log(1.0 / xi)) / n
    return max(t, math.sqrt(2.0 * t))


@dataclass
class OracleSession:
    """
    One oracle instance: registered queries, sample size, tail probability and
    the transcript of answers, in order.
    """

    queries: Dict[str, Query]
    xi: float
    n: int
    capacity: float
    transcript: List[Dict[str, Any]] = field(default_factory=list)

    @classmethod
    def for_queries(
        cls, queries: Sequence[Query], xi: float, n: int, capacity: Optional[float] = None
    ) -> "OracleSession":
        if not queries:
            raise BadInputs("an oracle session needs at least one query")
        table = {q.id: q for q in queries}
        if len(table) != len(queries):
            raise BadInputs("query ids must be unique within a session")
        cap = math.log(len(table)) if capacity is None else capacity
        oracle_tolerance(cap, xi, n)
        return cls(table, xi, n, cap)

    @property
    def tau(self) -> float:
        return oracle_tolerance(self.capacity, self.xi, self.n)

    def band(self, query: Query) -> float:
        return query.psi1_null * self.tau

    def require(self, query: Query) -> None:
        if query.id not in self.queries:
            raise BadInputs(f"query {query.id} is not registered in this session")

    def record(self, query: Query, value: float) -> float:
        self.transcript.append(
            {"round": len(self.transcript) + 1, "query_id": query.id, "value": float(value)}
        )
        return value

    def within_band(self, query: Query, value: float, expectation: float) -> bool:
        return abs(value - expectation) <= self.band(query)


def honest_oracle(
    model: Optional[IsingModel],
    session: OracleSession,
    query: Query,
    n: Optional[int] = None,
    seed: int = 0,
) -> float:
    """
    Sample mean of q over n fresh draws (the null when model is None).

    Each call draws its own sample, so answers to different queries are
    independent. Constant queries are answered exactly.
    """
    session.require(query)
    if model is not None and model.d != query.d:
        raise BadInputs(f"model has d={model.d}, query has d={query.d}")
    size = session.n if n is None else n
    if query.constant is not None:
        return session.record(query, query.constant)
    draws = sample_null(query.d, size, seed) if model is None else sample_exact(model, size, seed)
    return session.record(query, float(np.mean(query(draws.spins))))


@dataclass(frozen=True)
class SQAlgorithm:
    """
    Deterministic oracle algorithm: a query budget, a first query, a transition
    from the transcript so far to the next query (None halts) and a 0/1 decision.
    """

    budget: int
    initial: Query
    transition: Callable[[List[Tuple[Query, float]]], Optional[Query]] = field(repr=False)
    decision: Callable[[List[Tuple[Query, float]]], int] = field(repr=False)
    queries: Tuple[Query, ...] = ()

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise BadInputs(f"query budget must be >= 1, got {self.budget}")
        if not self.queries:
            object.__setattr__(self, "queries", (self.initial,))

    def run(self, answer: Callable[[Query], float]) -> Tuple[List[Tuple[Query, float]], int]:
        history: List[Tuple[Query, float]] = []
        nxt: Optional[Query] = self.initial
        while nxt is not None and len(history) < self.budget:
            history.append((nxt, float(answer(nxt))))
            nxt = self.transition(history)
        return history, int(self.decision(history))


def pair_scan_algorithm(pairs: Sequence[Tuple[int, int]], threshold: float, d: int) -> SQAlgorithm:
    """Ask every listed pair correlation in order; reject when one exceeds `threshold`."""
    if not pairs:
        raise BadInputs("pair_scan_algorithm needs at least one pair")
    queries = tuple(pair_query(i, j, d) for i, j in pairs)

    def transition(history: List[Tuple[Query, float]]) -> Optional[Query]:
        k = len(history)
        return queries[k] if k < len(queries) else None

    def decision(history: List[Tuple[Query, float]]) -> int:
        return int(any(v > threshold for _, v in history))

    return SQAlgorithm(len(queries), queries[0], transition, decision, queries)


def _session_answers(seed: int, p: np.ndarray, table: np.ndarray, n: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q = table.shape[0]
    idx = draw_state_indices(p, q * n, rng).reshape(q, n)
    return np.take_along_axis(table, idx, axis=1).mean(axis=1)


def oracle_coverage(
    model: Optional[IsingModel],
    queries: Sequence[Query],
    n: int,
    xi: float,
    sessions: int = 10_000,
    seed: int = 0,
    d: Optional[int] = None,
    threads: int = 1,
    progress: bool = False,
) -> Dict[str, Any]:
    """
    Fraction of honest-oracle sessions in which every answer lies in its band.

    Session i uses child i of the root seed; inside a session every query gets
    its own block of n fresh draws.
    """
    if sessions < 1:
        raise BadInputs(f"sessions must be >= 1, got {sessions}")
    dim = model.d if model is not None else (d if d is not None else queries[0].d)
    base = OracleSession.for_queries(queries, xi, n)
    for q in queries:
        if q.d != dim:
            raise BadInputs(f"query {q.id} has d={q.d}, expected {dim}")

    p = pmf_table(model if model is not None else IsingModel.null(dim))
    table = np.stack([q.values() for q in queries])
    expect = table @ p
    bands = np.array([base.band(q) for q in queries])

    def run(s: int) -> bool:
        answers = _session_answers(s, p, table, n)
        return bool(np.all(np.abs(answers - expect) <= bands))

    hits = parallel_map(
        run, spawn_seeds(seed, sessions), threads=threads, desc="oracle sessions", progress=progress
    )
    coverage = float(np.mean(hits))
    target = 1.0 - 2.0 * xi
    se = math.sqrt(max(target * (1.0 - target), 0.0) / sessions)
    passed = coverage >= target - 3.0 * se
    logger.info(
        "Oracle coverage %.4f over %d sessions (target %.4f, tau=%.4g)",
        coverage,
        sessions,
        target,
        base.tau,
    )
    return {
        "sessions": sessions,
        "queries": len(queries),
        "n": n,
        "xi": xi,
        "capacity": base.capacity,
        "tau": base.tau,
        "coverage": coverage,
        "target": target,
        "se": se,
        "passed": passed,
        "seed": seed,
    }
