# src/run.py
"""
Entry point for the Ising structure lab.
Usage:
    python -m src.run arboricity --graph k5.edges
    python -m src.run risk-curve --family clique --s 3 --d 12 --n 400 --theta-grid 0:0.2:9
    python -m src.run verify all
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from src.isl.cli.commands import HANDLERS
from src.isl.cli.verify import list_suites
from src.isl.errors import exit_code_for
from src.isl.utils.config_model import FAMILY_TAGS, SAMPLERS, Settings, load_settings
from src.isl.utils.logger import get_logger
from src.isl.utils.parallel import resolve_threads

logger = get_logger("Run")

DEFAULT_CONFIG = "config/default.yml"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", "-c", default=None, help="Path to config YAML.")
    p.add_argument("--threads", type=int, default=None, help="Worker threads (1 = reproducible).")
    p.add_argument("--seed", type=int, default=None, help="Root seed (default from config, 0).")
    p.add_argument("--out", "-o", default=None, help="Output file or directory.")


def _family(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--family", choices=FAMILY_TAGS, required=required)
    p.add_argument("--s", type=int, default=None, help="Pattern size (clique, star).")
    p.add_argument("--k", type=int, default=None, help="Community size.")
    p.add_argument("--l", type=int, default=None, help="Number of communities.")
    p.add_argument("--pattern", default=None, help="Custom pattern edges, e.g. 1-2,2-3.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isl", description="Structure detection experiments for zero-field Ising models."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("arboricity", help="Arboricity of a graph or family pattern.")
    _common(p)
    _family(p)
    p.add_argument("--graph", default=None, help="Edge list or JSON graph.")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--partition", action="store_true", help="Also report a forest partition.")

    p = sub.add_parser("euler-count", help="Eulerian subgraph counts by size.")
    _common(p)
    p.add_argument("--graph", required=True, help="Edge list or JSON (multi)graph.")
    p.add_argument("--max-k", dest="max_k", type=int, default=None)
    p.add_argument("--connected", action="store_true", help="Add connected counts.")

    p = sub.add_parser("chisq", help="Chi-square divergence of the placement mixture.")
    _common(p)
    _family(p, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--theta-grid", dest="theta_grid", default=None)
    p.add_argument("--limit", type=int, default=5_000, help="Placement enumeration limit.")
    p.add_argument("--enumerated", action="store_true", help="Add the state-space oracle.")

    p = sub.add_parser("lower-bound", help="Information lower bound on theta.")
    _common(p)
    _family(p, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--limit", type=int, default=5_000)

    p = sub.add_parser("sample", help="Draw spins from an Ising model.")
    _common(p)
    _family(p)
    p.add_argument("--graph", default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--sampler", choices=SAMPLERS, default="auto")

    p = sub.add_parser("scan-test", help="Run the scan test on a sample file.")
    _common(p)
    _family(p, required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--kappa", type=float, default=None)

    p = sub.add_parser("risk-curve", help="Monte Carlo risk of the scan test over theta.")
    _common(p)
    _family(p, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--theta-grid", dest="theta_grid", default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--kappa", type=float, default=None)

    p = sub.add_parser("calibrate", help="One-time constant calibration.")
    _common(p)
    _family(p)
    p.add_argument("what", choices=("kappa", "tv", "reduction", "phi"))
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--reps", type=int, default=None)

    p = sub.add_parser("moments", help="Rademacher moment polynomials and C(theta, s).")
    _common(p)
    p.add_argument("--m-max", dest="m_max", type=int, default=8)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--s", type=int, default=None)

    p = sub.add_parser("reduce", help="Sign-of-Gaussian reduction with its TV certificate.")
    _common(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta-grid", dest="theta_grid", default=None)
    p.add_argument("--format", choices=("csv", "islb", "parquet"), default="csv")
    p.add_argument("--eta", type=float, default=1.0, help="Frontier scale annotation.")
    p.add_argument("--delta", type=float, default=0.0, help="Frontier exponent slack.")

    p = sub.add_parser("sq-demo", help="Adversarial statistical-query oracle demo.")
    _common(p)
    _family(p, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None, help="Oracle kappa (default from p, eta).")
    p.add_argument("--sessions", type=int, default=0, help="Honest-oracle coverage sessions.")

    p = sub.add_parser("verify", help="Identity and invariant suites.")
    _common(p)
    p.add_argument("suite", nargs="?", default="all", help=f"One of {list_suites()}.")
    p.add_argument("--list", action="store_true", help="List suites and exit.")
    return parser


def resolve_settings(args: argparse.Namespace) -> Settings:
    """Model defaults < YAML < environment < flags."""
    path = args.config
    if path is None and Path(DEFAULT_CONFIG).exists():
        path = DEFAULT_CONFIG
    settings = load_settings(path)
    if args.threads is not None:
        settings.runtime.threads = resolve_threads(args.threads)
    if args.seed is not None:
        settings.runtime.seed = args.seed
    return settings


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args)
        logger.info("Running %s (seed=%d)", args.command, settings.runtime.seed)
        return HANDLERS[args.command](args, settings)
    except Exception as exc:
        code = exit_code_for(exc)
        logger.exception("%s failed (exit %d): %s", args.command, code, exc)
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
