# src/isl/cli/verify.py
"""
One-shot identity and invariant suites.

Each suite returns a check_report; `run_suite("all")` nests every suite.
Overrides swap an implementation for a test double (e.g. a corrupted
`moment_poly`) so the negative path can be exercised.
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Any, Callable, Dict, List, Mapping, Optional

import numpy as np

from ..errors import NoUncoveredGraph, UnknownSuite
from ..eulerian.chisquare import chi_square_divergence, chi_square_pair, chi_square_pair_enumerated
from ..eulerian.counting import eulerian_counts
from ..eulerian.polynomials import u_coefficients
from ..graph.families import GraphFamily
from ..graph.graph import Graph, Multigraph
from ..graph.witnessing import witnessing_set
from ..ising.curie_weiss import CurieWeissParams, curie_weiss_conditional_pmf
from ..ising.model import IsingModel, pmf_table
from ..ising.samplers import sample_exact
from ..moments.combinatorics import (
    double_factorial_reading,
    moment_bruteforce,
    moment_poly,
    partial_sum_signs_check,
    tangent_numbers,
    truncation_bounds_check,
)
from ..moments.inequalities import default_grid, scalar_inequalities_check
from ..moments.series import c_theta_s
from ..reduction.certificate import exact_support_tv
from ..reduction.exact import (
    curie_weiss_pmf_by_count,
    sign_pair_correlation,
    sign_pmf_by_count,
    tv_exchangeable,
)
from ..reduction.spiked import ReductionParams
from ..scan.risk import sample_replicates
from ..scan.statistics import max_scan_statistics, scan_statistics, w_statistic
from ..scan.tails import psi1_tail_check
from ..sqoracle.adversary import adversarial_oracle, chi_square_lower_bound_check
from ..sqoracle.counting import overlap_counts, overlap_counts_enumerated, zeta
from ..sqoracle.queries import oracle_coverage, pair_query, pair_scan_algorithm
from ..utils.config_model import ConstantsConfig
from ..utils.logger import get_logger
from ..utils.reporting import CheckResult, check_report

logger = get_logger("Verify")

SUITES = ("eulerian", "moments", "reduction", "scan", "oracle")
TANGENT_PREFIX = (1, 2, 16, 272)
DEFAULT_CONSTANTS = ConstantsConfig()

Check = Callable[[Mapping[str, Any]], CheckResult]


def _random_multigraph(rng: np.random.Generator, d: int, budget: int) -> Multigraph:
    a = np.zeros((d, d), dtype=np.int64)
    for _ in range(int(rng.integers(1, budget + 1))):
        i, j = rng.choice(d, size=2, replace=False)
        a[i, j] += 1
        a[j, i] += 1
    return Multigraph.from_matrix(a)


def _random_graph(rng: np.random.Generator, d: int, p: float) -> Graph:
    edges = [(i, j) for i, j in combinations(range(1, d + 1), 2) if rng.random() < p]
    return Graph(d, tuple(edges))


def eulerian_bruteforce(g: Multigraph) -> List[int]:
    """Even-degree sub-multisets by size, enumerating every subset of edge copies."""
    copies = g.copies()
    out = [0] * (len(copies) + 1)
    for mask in range(1 << len(copies)):
        deg = [0] * (g.d + 1)
        size = 0
        for b, (i, j) in enumerate(copies):
            if mask >> b & 1:
                deg[i] += 1
                deg[j] += 1
                size += 1
        if all(x % 2 == 0 for x in deg):
            out[size] += 1
    return out


def mixed_triangles(g: Graph, h: Graph) -> int:
    """Triangles of G ⊕ G' that use copies from both graphs."""
    total = 0
    for a, b, c in combinations(range(1, g.d + 1), 3):
        pairs = ((a, b), (a, c), (b, c))
        in_g = [int(g.has_edge(*e)) for e in pairs]
        in_h = [int(h.has_edge(*e)) for e in pairs]
        both = math.prod(x + y for x, y in zip(in_g, in_h))
        total += both - math.prod(in_g) - math.prod(in_h)
    return total


# eulerian


def _check_eulerian_counts(opts: Mapping[str, Any]) -> CheckResult:
    rng = np.random.default_rng(opts.get("seed", 0))
    for trial in range(int(opts.get("trials", 30))):
        g = _random_multigraph(rng, int(rng.integers(3, 7)), 10)
        fast = eulerian_counts(g)
        slow = eulerian_bruteforce(g)
        if [fast[k] for k in range(len(slow))] != slow:
            return CheckResult(
                "Eulerian counts vs brute force",
                False,
                {"first_failure": {"trial": trial, "slots": g.slots()}},
            )
    return CheckResult("Eulerian counts vs brute force", True)


def _check_u_coefficients(opts: Mapping[str, Any]) -> CheckResult:
    rng = np.random.default_rng(opts.get("seed", 0) + 1)
    for trial in range(int(opts.get("trials", 30))):
        d = int(rng.integers(3, 7))
        g, h = _random_graph(rng, d, 0.4), _random_graph(rng, d, 0.4)
        u = u_coefficients(g, h)
        expected = [0, 0, len(g.edge_set & h.edge_set), mixed_triangles(g, h)]
        got = [u.coeff(k) for k in range(4)]
        if got != expected:
            return CheckResult(
                "u_0..u_3 identities",
                False,
                {"first_failure": {"trial": trial, "got": got, "expected": expected}},
            )
    return CheckResult("u_0..u_3 identities", True)


def _check_chi_square(opts: Mapping[str, Any]) -> CheckResult:
    rng = np.random.default_rng(opts.get("seed", 0) + 2)
    worst = 0.0
    for _ in range(int(opts.get("trials", 20))):
        d = int(rng.integers(3, 7))
        g, h = _random_graph(rng, d, 0.4), _random_graph(rng, d, 0.4)
        theta = float(rng.uniform(0.01, 0.3))
        n = int(rng.integers(1, 4))
        a = chi_square_pair(g, h, theta, n)
        b = chi_square_pair_enumerated(g, h, theta, n)
        worst = max(worst, abs(a - b) / b)
    zero = chi_square_divergence(GraphFamily.clique(3), 6, 0.0, 10)
    return CheckResult(
        "chi-square pair identity",
        worst <= 1e-9 and zero == 0.0,
        {"max_rel_error": worst, "divergence_at_zero": zero},
    )


def _check_pmf_forms(opts: Mapping[str, Any]) -> CheckResult:
    rng = np.random.default_rng(opts.get("seed", 0) + 3)
    worst = 0.0
    for _ in range(int(opts.get("trials", 10))):
        g = _random_graph(rng, int(rng.integers(3, 9)), 0.3)
        theta = 0.5 / max(1.0, math.sqrt(2 * g.n_edges))
        model = IsingModel.from_graph(g, theta)
        a, b = pmf_table(model, "product"), pmf_table(model, "boltzmann")
        worst = max(worst, float(np.max(np.abs(a - b) / b)))
    return CheckResult("PMF product form vs Boltzmann", worst <= 1e-10, {"max_rel_error": worst})


# moments


def _check_moment_poly(opts: Mapping[str, Any]) -> CheckResult:
    poly = opts.get("moment_poly", moment_poly)
    for m in range(0, int(opts.get("m_max", 8)) + 1):
        p = poly(m)
        for s in range(0, int(opts.get("s_max", 20)) + 1):
            if p(s) != moment_bruteforce(m, s):
                return CheckResult(
                    "P_2m recursion vs brute force", False, {"first_failure": {"m": m, "s": s}}
                )
    return CheckResult("P_2m recursion vs brute force", True)


def _check_tangent(opts: Mapping[str, Any]) -> CheckResult:
    values = tangent_numbers(len(TANGENT_PREFIX)).values
    return CheckResult("tangent numbers", tuple(values) == TANGENT_PREFIX, {"values": list(values)})


def _check_truncation(opts: Mapping[str, Any]) -> CheckResult:
    for m in range(1, int(opts.get("m_max", 8)) + 1):
        for s in range(1, int(opts.get("s_max", 20)) + 1):
            if not partial_sum_signs_check(m, s):
                return CheckResult(
                    "truncation bounds", False, {"first_failure": {"m": m, "s": s, "l": None}}
                )
            for l in range((m + 1) // 2):
                if not truncation_bounds_check(m, s, l):
                    return CheckResult(
                        "truncation bounds", False, {"first_failure": {"m": m, "s": s, "l": l}}
                    )
    return CheckResult("truncation bounds", True)


def _check_double_factorial(opts: Mapping[str, Any]) -> CheckResult:
    reading = double_factorial_reading(8)
    return CheckResult("double factorial reading", reading == "odd", {"reading": reading})


def _check_inequalities(opts: Mapping[str, Any]) -> CheckResult:
    report = scalar_inequalities_check(
        default_grid(points=int(opts.get("grid_points", 20_001))),
        phi_sixth=float(opts.get("phi_sixth", DEFAULT_CONSTANTS.phi_sixth)),
    )
    failed = [r["name"] for r in report["inequalities"] if not r["passed"]]
    return CheckResult(
        "scalar inequalities", report["passed"], {"failed": failed, "grid": report["grid"]}
    )


def _check_c_theta_routes(opts: Mapping[str, Any]) -> CheckResult:
    worst = 0.0
    for s in (2, 4, 8):
        for theta in (0.01, 0.02, 0.03):
            a = c_theta_s(theta, s, route="binomial")
            b = c_theta_s(theta, s, route="series")
            worst = max(worst, abs(a - b) / a)
    return CheckResult("C(theta, s) series routes agree", worst <= 1e-10, {"max_rel": worst})


# reduction


def _check_tv_zero(opts: Mapping[str, Any]) -> CheckResult:
    values = {s: exact_support_tv(ReductionParams(0.0, s)) for s in range(3, 9)}
    return CheckResult(
        "reduction TV vanishes at theta=0",
        all(v <= 1e-15 for v in values.values()),
        {"tv": values},
    )


def _check_tv_monotone(opts: Mapping[str, Any]) -> CheckResult:
    for s in (3, 5, 8):
        grid = [0.04 / s * k for k in range(1, 8)]
        values = [exact_support_tv(ReductionParams(t, s)) for t in grid]
        if any(b < a - 1e-14 for a, b in zip(values, values[1:])):
            return CheckResult(
                "reduction TV decreases as theta decreases",
                False,
                {"first_failure": {"s": s, "tv": values}},
            )
    return CheckResult("reduction TV decreases as theta decreases", True)


def _check_cw_conditional(opts: Mapping[str, Any]) -> CheckResult:
    worst = 0.0
    for s in (3, 6, 12):
        for st in (0.1, 0.25, 0.4):
            p = CurieWeissParams(s, st / s)
            worst = max(
                worst, tv_exchangeable(curie_weiss_conditional_pmf(p), curie_weiss_pmf_by_count(p))
            )
    return CheckResult("Curie-Weiss conditional route", worst <= 1e-8, {"max_tv": worst})


def _check_sign_correlation(opts: Mapping[str, Any]) -> CheckResult:
    worst = 0.0
    for sigma in (0.1, 0.5, 2.0):
        table = sign_pmf_by_count(sigma, 2)
        corr = 2.0 * table[2] + 2.0 * table[0] - 2.0 * table[1]
        worst = max(worst, abs(corr - sign_pair_correlation(sigma)))
    return CheckResult("sign pair correlation", worst <= 1e-9, {"max_error": worst})


# scan


def _w_from_spins(spins: np.ndarray, h: Graph) -> float:
    x = spins.astype(np.float64)
    return float(np.mean([np.mean(x[:, i - 1] * x[:, j - 1]) for i, j in h.edges]))


def _check_null_centered(opts: Mapping[str, Any]) -> CheckResult:
    family = GraphFamily.clique(3)
    ws = witnessing_set(family, 7)
    reps, n = 400, 50
    spins = sample_replicates(None, 7, n, reps, int(opts.get("seed", 0)))
    first = np.array([_w_from_spins(spins[r], ws.members[0]) for r in range(reps)])
    se = 1.0 / math.sqrt(n * ws.members[0].n_edges * reps)
    ok = abs(float(first.mean())) <= 4.0 * se
    top = max_scan_statistics(spins, ws)
    return CheckResult(
        "null scan statistics are centred",
        ok and top.shape == (reps,),
        {"mean": float(first.mean()), "se": se},
    )


def _check_scan_consistency(opts: Mapping[str, Any]) -> CheckResult:
    family = GraphFamily.clique(3)
    ws = witnessing_set(family, 6)
    g = Graph.complete(6, on=(1, 2, 3))
    draws = sample_exact(IsingModel.from_graph(g, 0.2), 200, seed=int(opts.get("seed", 0)))
    vec = scan_statistics(draws, ws)
    direct = np.array([w_statistic(draws, h) for h in ws.members])
    err = float(np.max(np.abs(vec - direct)))
    return CheckResult("scan statistics vs direct W_H", err <= 1e-12, {"max_error": err})


def _check_psi1(opts: Mapping[str, Any]) -> CheckResult:
    constant = float(opts.get("psi1", DEFAULT_CONSTANTS.psi1))
    results = {}
    within = {}
    for leaves in (2, 4, 8):
        h = Graph(leaves + 1, tuple((1, j) for j in range(2, leaves + 2)))
        report = psi1_tail_check(
            IsingModel.null(leaves + 1), h, reps=2000, seed=0, constant=constant
        )
        results[leaves] = report["mgf_at_lambda_star"]
        within[leaves] = report["within_psi1_bound"]
    ok = all(v <= math.e for v in results.values()) and all(within.values())
    return CheckResult("psi1 bounds", ok, {"mgf": results, "within": within, "constant": constant})


# oracle


def _check_overlap_counts(opts: Mapping[str, Any]) -> CheckResult:
    for s, d in ((2, 4), (2, 8), (3, 8), (4, 10)):
        m = overlap_counts(s, d)
        if sum(m) != math.comb(d, s) or m != overlap_counts_enumerated(s, d):
            return CheckResult("overlap counts", False, {"first_failure": {"s": s, "d": d}})
    return CheckResult("overlap counts", True)


def _check_zeta(opts: Mapping[str, Any]) -> CheckResult:
    rows = {}
    for s, d in ((2, 16), (3, 40), (4, 100)):
        z = zeta(s, d)
        rows[f"{s},{d}"] = float(z)
        if z * s * s != d - 2 * s + 1:
            return CheckResult("zeta closed form", False, {"first_failure": {"s": s, "d": d}})
    return CheckResult("zeta closed form", True, {"zeta": rows})


def _check_adversary(opts: Mapping[str, Any]) -> CheckResult:
    algorithm = pair_scan_algorithm([(1, 2)], threshold=0.1, d=8)
    try:
        report = adversarial_oracle(GraphFamily.clique(2), 8, 0.2, algorithm, n=200)
    except NoUncoveredGraph as exc:
        return CheckResult("adversary forces risk 1", False, exc.report)
    return CheckResult(
        "adversary forces risk 1",
        report.risk == 1.0 and report.band_ok,
        {"fooled": report.fooled_placement.edges, "decision": report.decision},
    )


def _check_coverage(opts: Mapping[str, Any]) -> CheckResult:
    pairs = list(combinations(range(1, 9), 2))[:16]
    queries = [pair_query(i, j, 8) for i, j in pairs]
    model = IsingModel.from_graph(Graph.complete(8, on=(1, 2)), 0.2)
    report = oracle_coverage(
        model, queries, n=100, xi=0.05, sessions=int(opts.get("sessions", 2000)), seed=0
    )
    return CheckResult("honest oracle coverage", report["passed"], report)


def _check_chi_square_lower(opts: Mapping[str, Any]) -> CheckResult:
    report = chi_square_lower_bound_check(
        GraphFamily.clique(2), 6, 0.3, pair_query(1, 2, 6), n=2000
    )
    return CheckResult(
        "averaged chi-square exceeds 1 + 1/n",
        report["applicable"] and report["passed"],
        {
            "plus_size": report["plus_size"],
            "target": report["target"],
            "averaged": report.get("averaged"),
        },
    )


CHECKS: Dict[str, List[Check]] = {
    "eulerian": [
        _check_eulerian_counts,
        _check_u_coefficients,
        _check_chi_square,
        _check_pmf_forms,
    ],
    "moments": [
        _check_moment_poly,
        _check_tangent,
        _check_truncation,
        _check_double_factorial,
        _check_inequalities,
        _check_c_theta_routes,
    ],
    "reduction": [
        _check_tv_zero,
        _check_tv_monotone,
        _check_cw_conditional,
        _check_sign_correlation,
    ],
    "scan": [_check_null_centered, _check_scan_consistency, _check_psi1],
    "oracle": [
        _check_overlap_counts,
        _check_zeta,
        _check_adversary,
        _check_coverage,
        _check_chi_square_lower,
    ],
}


def list_suites() -> List[str]:
    return list(SUITES) + ["all"]


def run_suite(name: str, overrides: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """Run one named suite (or "all") and return its machine-readable report."""
    opts: Mapping[str, Any] = overrides or {}
    if name == "all":
        reports = {s: run_suite(s, opts) for s in SUITES}
        return {
            "suite": "all",
            "passed": all(r["passed"] for r in reports.values()),
            "suites": reports,
        }
    if name not in CHECKS:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {list_suites()}")

    results: List[CheckResult] = []
    for check in CHECKS[name]:
        try:
            results.append(check(opts))
        except Exception as exc:
            logger.exception("Check %s crashed", check.__name__)
            results.append(CheckResult(check.__name__, False, {"error": str(exc)}))
    report = check_report(name, results)
    for r in results:
        logger.info("[%s] %s", name, r.line())
    return report
