# src/isl/errors.py
"""
Exception hierarchy shared by every module.

Validation errors subclass ValueError (CLI exit 2); size and numeric
limits map to CLI exit 3.
"""
from __future__ import annotations


class IslError(Exception):
    """Root of all library errors."""


class ValidationError(IslError, ValueError):
    """Inputs violate a documented precondition."""


class GraphError(ValidationError):
    pass


class BadPlacement(ValidationError):
    pass


class BadInputs(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class EmptyWitness(ValidationError):
    pass


class UnknownSuite(ValidationError):
    pass


class DivergenceGuard(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class SizeExceeded(IslError):
    """Exact computation requested beyond its enumeration limit."""

    def __init__(self, what: str, value: int, limit: int) -> None:
        self.what = what
        self.value = value
        self.limit = limit
        super().__init__(f"{what}={value} exceeds the exact-computation limit {limit}")


class TooMany(SizeExceeded):
    """Enumeration would produce more items than allowed."""


class QuadratureFail(IslError, ArithmeticError):
    pass


class NoUncoveredGraph(IslError):
    """Every placement is covered by some query; the adversary cannot answer consistently."""

    def __init__(self, message: str, report: dict | None = None) -> None:
        super().__init__(message)
        self.report = report or {}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (SizeExceeded, QuadratureFail)):
        return 3
    if isinstance(exc, ValueError):
        return 2
    return 1
