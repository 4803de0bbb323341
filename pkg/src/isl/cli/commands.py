# src/isl/cli/commands.py
"""
Subcommand handlers.

Every handler takes the parsed arguments and the resolved Settings, writes
its artifacts with the resolved ExperimentConfig embedded, prints a short
summary on stdout and returns the exit status.
"""
from __future__ import annotations

import argparse
import json
import math
from itertools import combinations
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..errors import BadInputs, NoUncoveredGraph
from ..eulerian.chisquare import (
    MAX_JOINT_BITS,
    chi_square_divergence,
    chi_square_divergence_enumerated,
    lecam_risk_lower_bound,
)
from ..eulerian.counting import count_eulerian_connected, eulerian_counts
from ..eulerian.lower_bound import (
    LowerBoundInputs,
    lower_bound_theta,
    mean_overlap,
    negative_association_bound,
    negative_association_lhs,
    upper_bound_theta,
)
from ..extract.graph_reader import GraphReader
from ..extract.sample_reader import SampleReader
from ..graph.arboricity import arboricity, densest_subset, family_arboricity, forest_partition
from ..graph.families import GraphFamily, build_pattern, placement_count
from ..graph.graph import Edge, Graph
from ..graph.witnessing import witnessing_set
from ..ising.curie_weiss import CurieWeissParams, sample_curie_weiss
from ..ising.model import IsingModel
from ..ising.samplers import SampleMatrix, gibbs_defaults, sample_exact, sample_gibbs
from ..load.exporter import append_jsonl, write_json, write_samples, write_table
from ..moments.combinatorics import (
    a2_bound_ratio,
    double_factorial_reading,
    leading_coefficients,
    moment_poly,
    tangent_numbers,
)
from ..moments.inequalities import calibrate_phi_constant, default_grid
from ..moments.series import (
    c_theta_s,
    c_theta_s_upper_bound,
    calibrate_tv_constant,
    derived_c_prime,
    kl_bound_cwn_gaussian,
    tv_bound_cwn_gaussian,
)
from ..reduction.certificate import (
    calibrate_reduction_constant,
    end_to_end_reduction,
    hardness_frontier,
    reduction_certificate,
    two_sample_accuracy,
)
from ..reduction.spiked import ReductionParams, SpikedModel, sample_spiked, sign_reduce
from ..scan.risk import DetectionProblem, calibrate_kappa, risk_curve
from ..scan.statistics import ScanConfig, scan_statistics, scan_test
from ..sqoracle.adversary import adversarial_oracle
from ..sqoracle.counting import default_oracle_kappa, oracle_threshold
from ..sqoracle.queries import oracle_coverage, pair_scan_algorithm
from ..utils.config_model import ExperimentConfig, Settings
from ..utils.logger import get_logger
from .verify import list_suites, run_suite

logger = get_logger("Commands")

Handler = Callable[[argparse.Namespace, Settings], int]

# (s, s*theta) pairs for the one-time constant calibrations
CALIBRATION_S = (3, 4, 5, 6, 7, 8)
CALIBRATION_LOADS = (0.05, 0.1, 0.2, 0.3, 0.4)


def parse_pattern(text: Optional[str]) -> List[Edge]:
    """'1-2,2-3' -> [(1, 2), (2, 3)]."""
    if not text:
        return []
    edges: List[Edge] = []
    for item in text.split(","):
        a, _, b = item.strip().partition("-")
        if not b:
            raise BadInputs(f"pattern edge {item!r} must look like i-j")
        edges.append((int(a), int(b)))
    return edges


def parse_grid(text: Optional[str]) -> Optional[List[float]]:
    """Comma list '0.01,0.02' or inclusive 'start:stop:count'."""
    if text is None:
        return None
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise BadInputs(f"grid {text!r} must be start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise BadInputs("theta grid is empty")
        return [float(v) for v in np.linspace(start, stop, count)]
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise BadInputs("theta grid is empty")
    return values


def family_from_args(args: argparse.Namespace) -> GraphFamily:
    if getattr(args, "family", None) is None:
        raise BadInputs(f"{args.command} needs --family")
    return GraphFamily.from_params(
        args.family, s=args.s, k=args.k, l=args.l, pattern=parse_pattern(args.pattern)
    )


def experiment(args: argparse.Namespace, settings: Settings, **fields: Any) -> ExperimentConfig:
    """The resolved run description embedded in every artifact."""
    base: Dict[str, Any] = {
        "subcommand": args.command,
        "family": getattr(args, "family", None),
        "s": getattr(args, "s", None),
        "k": getattr(args, "k", None),
        "l": getattr(args, "l", None),
        "d": getattr(args, "d", None),
        "n": getattr(args, "n", None),
        "theta": getattr(args, "theta", None),
        "reps": getattr(args, "reps", None),
        "kappa": getattr(args, "kappa", None),
        "seed": settings.runtime.seed,
        "threads": settings.runtime.threads,
        "out": str(args.out) if args.out else None,
        "constants": settings.constants.model_dump(mode="json"),
    }
    base.update(fields)
    return ExperimentConfig(**base)


def output_path(args: argparse.Namespace, settings: Settings, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(settings.runtime.output_dir) / default_name


def _config_dict(cfg: ExperimentConfig) -> Dict[str, Any]:
    return cfg.model_dump(mode="json")


def _first_placement(family: GraphFamily, d: Optional[int]) -> Graph:
    dim = family.s if d is None else d
    return build_pattern(family, tuple(range(1, family.s + 1)), dim)


def _echo(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True, default=str))


# graph


def cmd_arboricity(args: argparse.Namespace, settings: Settings) -> int:
    limits = settings.limits
    family: Optional[GraphFamily] = None
    if args.graph:
        g = GraphReader().read(Path(args.graph))
    else:
        family = family_from_args(args)
        g = _first_placement(family, args.d)
    value = arboricity(g, family=family, max_vertices=limits.arboricity_max_vertices)

    report: Dict[str, Any] = {"arboricity": value, "d": g.d, "n_edges": g.n_edges}
    if len(g.vertices) <= limits.arboricity_max_vertices:
        subset, ratio = densest_subset(g, limits.arboricity_max_vertices)
        report["densest_subset"] = sorted(subset)
        report["ratio"] = float(ratio)
    if args.partition:
        forests = forest_partition(g, value, limits.forest_partition_max_d)
        report["forests"] = [[list(e) for e in f] for f in forests or []]
        report["partition_found"] = forests is not None

    cfg = experiment(args, settings, d=g.d, params={"graph": args.graph})
    write_json(report, output_path(args, settings, "arboricity.json"), _config_dict(cfg))
    print(value)
    return 0


# eulerian


def cmd_euler_count(args: argparse.Namespace, settings: Settings) -> int:
    limit = settings.limits.eulerian_max_multiplicity
    mg = GraphReader().read_multigraph(Path(args.graph))
    counts = eulerian_counts(mg, limit=limit)
    max_k = counts.K if args.max_k is None else args.max_k
    if max_k < 0:
        raise BadInputs(f"--max-k must be >= 0, got {max_k}")

    ks = list(range(max_k + 1))
    df = pd.DataFrame({"k": ks, "count": [counts[k] for k in ks]})
    if args.connected:
        df["connected"] = [count_eulerian_connected(mg, k, limit) for k in ks]

    cfg = experiment(args, settings, d=mg.d, params={"graph": args.graph, "max_k": max_k})
    write_table(df, output_path(args, settings, "euler_count.csv"), _config_dict(cfg))
    for k in ks:
        if k > 0 and counts[k]:
            print(f"k={k}: {counts[k]}")
    return 0


def cmd_chisq(args: argparse.Namespace, settings: Settings) -> int:
    family = family_from_args(args)
    thetas = parse_grid(args.theta_grid) or [float(args.theta)]
    rows: List[Dict[str, Any]] = []
    for theta in thetas:
        div = chi_square_divergence(
            family, args.d, theta, args.n, limit=args.limit, threads=settings.runtime.threads
        )
        row: Dict[str, Any] = {
            "theta": theta,
            "n": args.n,
            "divergence": div,
            "risk_lower_bound": (
                max(0.0, lecam_risk_lower_bound(div)) if math.isfinite(div) else 0.0
            ),
        }
        if args.enumerated and args.d * args.n <= MAX_JOINT_BITS:
            row["divergence_enumerated"] = chi_square_divergence_enumerated(
                family, args.d, theta, args.n
            )
        rows.append(row)

    cfg = experiment(args, settings, theta_grid=thetas, params={"limit": args.limit})
    write_table(pd.DataFrame(rows), output_path(args, settings, "chisq.csv"), _config_dict(cfg))
    for row in rows:
        print(f"theta={row['theta']:.6g} chi2={row['divergence']:.6g}")
    return 0


def cmd_lower_bound(args: argparse.Namespace, settings: Settings) -> int:
    family = family_from_args(args)
    inputs = LowerBoundInputs.for_family(family, args.d)
    lower = lower_bound_theta(inputs, args.n)
    kappa = args.kappa if args.kappa is not None else 1.0
    report: Dict[str, Any] = {
        "family": family.label,
        "inputs": inputs.to_dict(),
        "placements": placement_count(family, args.d),
        "lower_bound_theta": lower,
        "upper_bound_theta": upper_bound_theta(family, args.d, args.n, kappa),
    }
    if report["placements"] <= args.limit:
        report["mean_overlap_enumerated"] = float(
            mean_overlap(family, args.d, exact=True, limit=args.limit)
        )
        report["negative_association"] = {
            "lhs": negative_association_lhs(
                family, args.d, inputs.R, lower, args.n, limit=args.limit
            ),
            "bound": negative_association_bound(inputs.N, inputs.R, lower, args.n),
        }

    cfg = experiment(args, settings, params={"limit": args.limit})
    write_json(report, output_path(args, settings, "lower_bound.json"), _config_dict(cfg))
    print(f"{lower:.6g}")
    return 0


# ising


def draw_samples(
    kind: str, g: Graph, theta: float, n: int, seed: int, settings: Settings
) -> SampleMatrix:
    """One sample matrix from θ·A_g with the named sampler ("auto" picks by d)."""
    if kind == "auto":
        kind = "exact_enum" if g.d <= settings.limits.pmf_max_d else "gibbs"
    model = IsingModel.from_graph(g, theta, high_temperature=False)
    if kind == "exact_enum":
        return sample_exact(model, n, seed=seed)
    if kind == "gibbs":
        sc = settings.sampler
        burn_in, thin = gibbs_defaults(g.d, sc.gibbs_burn_in_per_d, sc.gibbs_thin)
        return sample_gibbs(model, n, burn_in, thin, seed=seed, chains=sc.gibbs_chains)

    support = sorted(g.vertices)
    s = len(support)
    if g.n_edges != s * (s - 1) // 2:
        raise BadInputs(f"sampler {kind} needs a clique graph, got {g.n_edges} edges on {s}")
    rng = np.random.default_rng(seed)
    spins = (2 * rng.integers(0, 2, size=(n, g.d), dtype=np.int8) - 1).astype(np.int8)
    idx = np.asarray(support) - 1
    if kind == "curie_weiss_cond_iid":
        # per-edge θ is Curie-Weiss θ/2
        clique = sample_curie_weiss(
            CurieWeissParams(s, theta / 2.0),
            n,
            seed=seed,
            points=settings.sampler.cwn_grid_points,
            margin=settings.sampler.cwn_grid_margin,
        )
        spins[:, idx] = clique.spins
    elif kind == "sign_of_gaussian":
        sigma = ReductionParams(theta / 2.0, s).sigma
        w = sample_spiked(SpikedModel(s, s, sigma), n, seed=seed)
        spins[:, idx] = sign_reduce(w, seed=seed).spins
    else:
        raise BadInputs(f"unknown sampler {kind!r}")
    return SampleMatrix(spins, int(seed), kind)


def cmd_sample(args: argparse.Namespace, settings: Settings) -> int:
    if args.graph:
        g = GraphReader().read(Path(args.graph))
    else:
        g = _first_placement(family_from_args(args), args.d)
    seed = settings.runtime.seed
    samples = draw_samples(args.sampler, g, args.theta, args.n, seed, settings)
    cfg = experiment(args, settings, d=g.d, sampler=args.sampler, params={"graph": args.graph})
    report = write_samples(samples, output_path(args, settings, "samples.csv"), _config_dict(cfg))
    _echo({k: report[k] for k in ("path", "n", "d", "sampler", "content_hash")})
    return 0


# scan


def cmd_scan_test(args: argparse.Namespace, settings: Settings) -> int:
    family = family_from_args(args)
    samples = SampleReader().read(Path(args.samples))
    ws = witnessing_set(family, samples.d, settings.limits.placements)
    R = family_arboricity(family)
    kappa = args.kappa if args.kappa is not None else settings.constants.kappa
    if kappa is None:
        kappa = calibrate_kappa(
            family,
            samples.d,
            samples.n,
            alpha=settings.scan.alpha,
            reps=settings.scan.reps,
            seed=settings.runtime.seed,
            grid=list(settings.scan.kappa_grid.values()),
            witnessing=ws,
        )
    scan_cfg = ScanConfig(ws, float(kappa), R, samples.n)
    stats = scan_statistics(samples, ws)
    top = int(np.argmax(stats))
    decision = scan_test(samples, scan_cfg)
    report = {
        "decision": decision,
        "max_statistic": float(stats[top]),
        "argmax_witness": [list(e) for e in ws.members[top].edges],
        "threshold": scan_cfg.threshold,
        "kappa": float(kappa),
        "R": R,
        "witnesses": len(ws),
        "Mcap": ws.Mcap,
        "n": samples.n,
        "d": samples.d,
    }
    cfg = experiment(
        args,
        settings,
        d=samples.d,
        n=samples.n,
        kappa=float(kappa),
        params={"samples": args.samples},
    )
    write_json(report, output_path(args, settings, "scan_test.json"), _config_dict(cfg))
    print(decision)
    return 0


def cmd_risk_curve(args: argparse.Namespace, settings: Settings) -> int:
    family = family_from_args(args)
    thetas = parse_grid(args.theta_grid) or [float(args.theta)]
    reps = args.reps if args.reps is not None else settings.scan.reps
    kappa = args.kappa if args.kappa is not None else settings.constants.kappa
    problem = DetectionProblem(family, args.d, args.n)
    estimates = risk_curve(
        problem,
        thetas,
        kappa=kappa,
        alpha=settings.scan.alpha,
        reps=reps,
        seed=settings.runtime.seed,
        max_alternatives=settings.scan.max_alternatives,
        placement_limit=settings.limits.placements,
        threads=settings.runtime.threads,
        progress=settings.runtime.progress,
    )
    df = pd.DataFrame([e.to_row() for e in estimates])
    df["n_alternatives"] = [e.n_alternatives for e in estimates]
    df["witness_size_ok"] = [e.witness_size_ok for e in estimates]

    cfg = experiment(
        args,
        settings,
        theta_grid=thetas,
        reps=reps,
        kappa=estimates[0].kappa if estimates else kappa,
        params={"alpha": settings.scan.alpha},
    )
    write_table(df, output_path(args, settings, "risk_curve.csv"), _config_dict(cfg))
    for e in estimates:
        print(f"theta={e.theta:.6g} total={e.total:.4f} (se {e.se_total:.4f})")
    return 0


def _calibration_grid() -> List[Tuple[int, float]]:
    return [(s, load / s) for s in CALIBRATION_S for load in CALIBRATION_LOADS]


def cmd_calibrate(args: argparse.Namespace, settings: Settings) -> int:
    what = args.what
    params: Dict[str, Any] = {"what": what}
    if what == "kappa":
        if args.d is None or args.n is None:
            raise BadInputs("calibrate kappa needs --d and --n")
        family = family_from_args(args)
        reps = args.reps if args.reps is not None else settings.scan.reps
        value = calibrate_kappa(
            family,
            args.d,
            args.n,
            alpha=settings.scan.alpha,
            reps=reps,
            seed=settings.runtime.seed,
            grid=list(settings.scan.kappa_grid.values()),
        )
        params["alpha"] = settings.scan.alpha
    elif what == "tv":
        grid = _calibration_grid()
        value = calibrate_tv_constant(grid)
        params["grid"] = grid
    elif what == "reduction":
        grid = _calibration_grid()
        value = calibrate_reduction_constant(grid)
        params["grid"] = grid
    elif what == "phi":
        value = calibrate_phi_constant(default_grid())
    else:
        raise BadInputs(f"unknown calibration target {what!r}")

    cfg = experiment(args, settings, params=params)
    report = {"what": what, "value": value}
    write_json(report, output_path(args, settings, f"calibrate_{what}.json"), _config_dict(cfg))
    print(f"{value:.6g}")
    return 0


# moments


def cmd_moments(args: argparse.Namespace, settings: Settings) -> int:
    if args.m_max < 1:
        raise BadInputs(f"--m-max must be >= 1, got {args.m_max}")
    tn = tangent_numbers(args.m_max)
    rows: List[Dict[str, Any]] = []
    for m in range(1, args.m_max + 1):
        a0, a1, a2 = leading_coefficients(m)
        rows.append(
            {
                "m": m,
                "tangent": tn[m - 1],
                "coefficients": " ".join(str(c) for c in moment_poly(m).coeffs),
                "a0": a0,
                "a1": a1,
                "a2": a2,
                "a2_ratio": float(a2_bound_ratio(m)) if m >= 3 else None,
            }
        )
    out = output_path(args, settings, "moments.csv")
    cfg = experiment(args, settings, params={"m_max": args.m_max})
    write_table(pd.DataFrame(rows), out, _config_dict(cfg))
    print(f"double factorial reading: {double_factorial_reading(args.m_max)}")

    if args.theta is not None and args.s is not None:
        theta, s = float(args.theta), int(args.s)
        series: Dict[str, Any] = {"theta": theta, "s": s, "binomial": c_theta_s(theta, s)}
        if s * theta < 0.5:
            c_prime = settings.constants.c_prime or derived_c_prime(settings.constants.a2)
            series["series"] = c_theta_s(theta, s, route="series")
            series["upper_bound"] = c_theta_s_upper_bound(theta, s, c_prime)
            series["tv_bound"] = tv_bound_cwn_gaussian(theta, s, 1, settings.constants.tv_cwn)
            series["kl_bound"] = kl_bound_cwn_gaussian(theta, s)
        write_json(series, out.with_name(out.stem + "_series.json"), _config_dict(cfg))
        print(f"C(theta, s) = {series['binomial']:.12g}")
    return 0


# reduction


def cmd_reduce(args: argparse.Namespace, settings: Settings) -> int:
    seed = settings.runtime.seed
    pair = end_to_end_reduction(args.theta, args.s, args.d, args.n, seed=seed)
    out_dir = output_path(args, settings, "reduce")
    params = {"format": args.format, "eta": args.eta, "delta": args.delta}
    cfg = _config_dict(experiment(args, settings, params=params))

    pca = write_samples(pair.pca, out_dir / f"pca.{args.format}", cfg)
    ising = write_samples(pair.ising, out_dir / f"ising.{args.format}", cfg)
    grid = parse_grid(args.theta_grid)
    certificate = reduction_certificate(
        pair.params,
        args.n,
        grid=grid,
        tv_constant=settings.constants.tv_cwn,
        reduction_constant=settings.constants.reduction_tv,
    )
    certificate["support"] = list(pair.support)
    certificate["frontier"] = hardness_frontier(args.n, args.s, eta=args.eta, delta=args.delta)
    certificate["samples"] = {"pca": pca["content_hash"], "ising": ising["content_hash"]}
    if args.n >= 10:
        certificate["proxy_accuracy"] = two_sample_accuracy(pair.pca, pair.ising, seed=seed)
    write_json(certificate, out_dir / "certificate.json", cfg)
    _echo(
        {
            "sigma": pair.params.sigma,
            "exact_tv_support": certificate["exact_tv_support"],
            "bound_total": certificate["bounds"]["total"],
        }
    )
    return 0


# sqoracle


def cmd_sq_demo(args: argparse.Namespace, settings: Settings) -> int:
    family = family_from_args(args)
    xi = settings.oracle.xi
    all_pairs = list(combinations(range(1, args.d + 1), 2))
    budget = args.budget if args.budget is not None else len(all_pairs) // 2
    if not 1 <= budget <= len(all_pairs):
        raise BadInputs(f"--budget must lie in 1..{len(all_pairs)}, got {budget}")
    oracle = settings.oracle
    kappa = args.kappa if args.kappa is not None else oracle.kappa
    if kappa is None:
        kappa = default_oracle_kappa(oracle.p, oracle.eta)
    threshold = args.threshold
    if threshold is None:
        threshold = oracle_threshold(
            family.s, args.d, args.n, budget, kappa, p=oracle.p, eta=oracle.eta
        )
    algorithm = pair_scan_algorithm(all_pairs[:budget], threshold, args.d)

    out_dir = output_path(args, settings, "sq_demo")
    params = {"xi": xi, "budget": budget, "threshold": threshold}
    cfg = _config_dict(experiment(args, settings, kappa=kappa, params=params))
    transcript_path = out_dir / "transcript.jsonl"
    transcript_path.unlink(missing_ok=True)

    try:
        result = adversarial_oracle(
            family, args.d, args.theta, algorithm, n=args.n, xi=xi, limit=settings.limits.placements
        )
    except NoUncoveredGraph as exc:
        logger.warning("Adversary found no uncovered placement: %s", exc)
        report: Dict[str, Any] = {"fooled": False, "reason": str(exc), **exc.report}
    else:
        for entry in result.transcript:
            append_jsonl(transcript_path, entry)
        report = {"fooled": True, **result.to_dict()}

    if args.sessions > 0:
        report["coverage"] = oracle_coverage(
            None,
            list(algorithm.queries),
            args.n,
            xi,
            sessions=args.sessions,
            seed=settings.runtime.seed,
            d=args.d,
            threads=settings.runtime.threads,
            progress=settings.runtime.progress,
        )
    write_json(report, out_dir / "adversary.json", cfg)
    _echo({k: report.get(k) for k in ("fooled", "decision", "risk", "tau")})
    return 0


# verify


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    if args.list:
        print(json.dumps(list_suites()))
        return 0
    constants = settings.constants
    opts = {"phi_sixth": constants.phi_sixth, "psi1": constants.psi1}
    report = run_suite(args.suite, opts)
    if args.out:
        cfg = experiment(args, settings, params={"suite": args.suite})
        write_json(report, Path(args.out), _config_dict(cfg))
    print(json.dumps(report, indent=2, sort_keys=True, default=str))
    return 0 if report["passed"] else 1


HANDLERS: Dict[str, Handler] = {
    "arboricity": cmd_arboricity,
    "euler-count": cmd_euler_count,
    "chisq": cmd_chisq,
    "lower-bound": cmd_lower_bound,
    "sample": cmd_sample,
    "scan-test": cmd_scan_test,
    "risk-curve": cmd_risk_curve,
    "calibrate": cmd_calibrate,
    "moments": cmd_moments,
    "reduce": cmd_reduce,
    "sq-demo": cmd_sq_demo,
    "verify": cmd_verify,
}
