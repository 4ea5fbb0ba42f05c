# app/errors.py - Exception hierarchy shared by the engine and the CLI
"""
Every failure the engine can report:
- domain errors from exact arithmetic (inverting zero, ac(0), inexact division)
- hypothesis violations (p | m, ldeg, repeated roots, non-integral curves)
- parse errors with an input offset
- oracle budget refusals
- internal bookkeeping failures (series closure, recursion measure)

Each class carries the process exit code the CLI uses and a short
machine-readable reason.
"""
from typing import Optional


class IgusaError(Exception):
    """Base class for all engine errors."""

    exit_code = 1
    reason = "internal error"

    def __init__(self, message: str, reason: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if reason is not None:
            self.reason = reason

    def to_dict(self) -> dict:
        return {"error": self.reason, "message": self.message}


# ============================================================================
# ARITHMETIC
# ============================================================================

class DomainError(IgusaError, ValueError):
    """An operation was applied outside its domain."""

    exit_code = 2
    reason = "domain error"


class DivergentSeriesError(DomainError):
    reason = "divergent series"


# ============================================================================
# INPUT
# ============================================================================

class ParseError(IgusaError):
    """Malformed textual input; `offset` points into the source string."""

    exit_code = 2
    reason = "parse error"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["offset"] = self.offset
        return data


class HypothesisError(IgusaError):
    """The input lies outside the class of polynomials the solver handles."""

    exit_code = 2
    reason = "hypothesis violation"


class NonIntegralError(HypothesisError):
    """A factored curve does not expand to a polynomial over O_K."""

    reason = "non-integral curve"

    def __init__(self, message: str, check: str):
        super().__init__(message)
        self.check = check

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["check"] = self.check
        return data


# ============================================================================
# RESOURCES AND INTERNAL CONSISTENCY
# ============================================================================

class BudgetExceededError(IgusaError):
    """An enumeration would exceed the configured budget."""

    exit_code = 3
    reason = "budget exceeded"


class SeriesStabilizationError(IgusaError):
    """A cone series did not show the predicted constant ratio."""

    reason = "series stabilization failed"


class RecursionMeasureError(IgusaError):
    """The root-clustering recursion failed to decrease its measure."""

    reason = "recursion measure did not decrease"
