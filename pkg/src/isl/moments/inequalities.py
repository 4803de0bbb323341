# src/isl/moments/inequalities.py
"""
Scalar inequalities behind the sign-reduction total-variation bound.

Each entry is written as `lhs(x) - rhs(x) <= 0`; the checker evaluates the
gap on a grid and records the largest violation.
"""
from __future__ import annotations

import math
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd
from scipy.special import erf, log_ndtr

from ..errors import BadInputs
from ..utils.logger import get_logger

logger = get_logger("Inequalities")

SQRT_2_PI = math.sqrt(2.0 / math.pi)
GRID_LIMIT = 10.0
GRID_STEP = 1e-3
VIOLATION_TOL = 1e-12

# fifth-order Taylor coefficients of log Φ(x) around 0
LOG_PHI_COEFFS = (
    -math.log(2.0),
    SQRT_2_PI,
    -1.0 / math.pi,
    -(math.pi - 4.0) / (3.0 * math.sqrt(2.0) * math.pi**1.5),
    (math.pi - 3.0) / (3.0 * math.pi**2),
    (96.0 - 40.0 * math.pi + 3.0 * math.pi**2) / (60.0 * math.sqrt(2.0) * math.pi**2.5),
)


def _log_cosh(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(x, -x) - math.log(2.0)


def _log_phi_poly(x: np.ndarray) -> np.ndarray:
    return sum(c * x**i for i, c in enumerate(LOG_PHI_COEFFS))


def _log_g(y: np.ndarray) -> np.ndarray:
    """log of e^y / (e^y + e^-y)."""
    return y - np.logaddexp(y, -y)


def _gap_functions(phi_sixth: float) -> Dict[str, Callable[[np.ndarray], np.ndarray]]:
    def log_g_lower(x: np.ndarray) -> np.ndarray:
        poly = -math.log(2.0) + SQRT_2_PI * x - x**2 / math.pi + x**4 / (3.0 * math.pi**2)
        return poly - 8.0 * x**6 / (45.0 * math.pi**3) - _log_g(SQRT_2_PI * x)

    return {
        "logcosh_quartic_lower": lambda x: x**2 / 2 - _log_cosh(x) - x**4 / 12,
        "logcosh_sextic_upper": lambda x: _log_cosh(x) - x**2 / 2 + x**4 / 12 - x**6 / 45,
        "log_phi_upper": lambda x: log_ndtr(x) - _log_phi_poly(x) - phi_sixth * x**6,
        "log_one_minus_phi_upper": lambda x: log_ndtr(-x) - _log_phi_poly(-x) - phi_sixth * x**6,
        "log_g_lower": log_g_lower,
        "log_one_minus_g_lower": lambda x: log_g_lower(-x),
        "cubic_sign_bound": lambda x: -erf(x / math.sqrt(2.0)) * x**3
        + SQRT_2_PI * x**4
        - x**6 / (3.0 * math.sqrt(2.0 * math.pi)),
        "quintic_sign_bound": lambda x: erf(x / math.sqrt(2.0)) * x**5 - SQRT_2_PI * x**6,
    }


INEQUALITY_NAMES = tuple(_gap_functions(0.0).keys())


def default_grid(limit: float = GRID_LIMIT, points: Optional[int] = None) -> np.ndarray:
    """Symmetric grid on [-limit, limit]; step GRID_STEP unless `points` is given."""
    if points is None:
        points = int(round(2.0 * limit / GRID_STEP)) + 1
    return np.linspace(-limit, limit, points)


def calibrate_phi_constant(
    grid: Optional[Iterable[float]] = None, min_abs: float = 0.1
) -> float:
    """
    Smallest C >= 0 with log Φ(x) <= fifth-order polynomial + C x^6 on the grid.

    Points with |x| < min_abs are skipped: there the gap is below rounding noise
    relative to x^6.
    """
    x = np.asarray(list(grid) if grid is not None else default_grid(), dtype=np.float64)
    x = x[np.abs(x) >= min_abs]
    if x.size == 0:
        return 0.0
    ratio = (log_ndtr(x) - _log_phi_poly(x)) / x**6
    return float(max(0.0, np.max(ratio)))


def scalar_inequalities_check(
    grid: Optional[Iterable[float]] = None, phi_sixth: float = 0.05
) -> Dict[str, Any]:
    """
    Evaluate every inequality on `grid` (|x| <= 10).

    Returns a report with per-inequality max gap, arg-max and pass flag, plus a
    pandas table of the gaps under "table".
    """
    x = np.asarray(list(grid) if grid is not None else default_grid(), dtype=np.float64)
    if x.size == 0:
        raise BadInputs("inequality grid is empty")
    if np.any(np.abs(x) > GRID_LIMIT):
        raise BadInputs(f"grid must lie within |x| <= {GRID_LIMIT}")

    rows: List[Dict[str, Any]] = []
    table = pd.DataFrame({"x": x})
    for name, fn in _gap_functions(phi_sixth).items():
        gap = np.asarray(fn(x), dtype=np.float64)
        table[name] = gap
        idx = int(np.argmax(gap))
        worst = float(gap[idx])
        rows.append(
            {
                "name": name,
                "max_violation": max(worst, 0.0),
                "max_gap": worst,
                "at": float(x[idx]),
                "passed": bool(worst <= VIOLATION_TOL),
            }
        )
    passed = all(r["passed"] for r in rows)
    if not passed:
        logger.warning(
            "Scalar inequalities violated: %s", [r["name"] for r in rows if not r["passed"]]
        )
    return {
        "passed": passed,
        "phi_sixth": phi_sixth,
        "grid": {"min": float(x.min()), "max": float(x.max()), "points": int(x.size)},
        "inequalities": rows,
        "table": table,
    }
