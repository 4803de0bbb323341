# src/isl/utils/reporting.py
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..utils.logger import get_logger

logger = get_logger("Reporting")


def to_builtin(obj: Any) -> Any:
    """json.dump default= hook for numpy scalars/arrays, Fractions and Paths."""
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        return f"{self.name}: {self.status}"


def check_report(suite: str, results: List[CheckResult]) -> Dict[str, Any]:
    """
    Machine-readable pass/fail summary for one verification suite.

    Report fields:
      - suite, passed (bool), n_checks, n_failed
      - checks: list of {name, status, details}
      - notes: human one-liners for failures
    """
    failed = [r for r in results if not r.passed]
    report: Dict[str, Any] = {
        "suite": suite,
        "passed": not failed,
        "n_checks": len(results),
        "n_failed": len(failed),
        "checks": [{"name": r.name, "status": r.status, "details": r.details} for r in results],
    }
    notes: List[str] = []
    for r in failed:
        where = r.details.get("first_failure")
        notes.append(f"{r.name} failed" + (f" at {where}" if where is not None else ""))
    report["notes"] = notes
    return report


def save_report(report: Dict, out_path: Path, config: Optional[Dict[str, Any]] = None) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    payload = dict(report)
    if config is not None:
        payload["config"] = config
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, ensure_ascii=False, default=to_builtin)
    logger.info("Wrote report: %s", out_path)
