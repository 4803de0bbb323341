from .commands import HANDLERS, draw_samples, experiment, parse_grid, parse_pattern
from .verify import SUITES, list_suites, run_suite

__all__ = [
    "HANDLERS",
    "SUITES",
    "draw_samples",
    "experiment",
    "list_suites",
    "parse_grid",
    "parse_pattern",
    "run_suite",
]
