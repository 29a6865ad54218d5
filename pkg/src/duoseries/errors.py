"""Domain error taxonomy shared across modules.

Every error carries a machine-readable ``code`` so the CLI can emit
structured error JSON and exit with status 1.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all domain-level failures (CLI exit status 1)."""

    code = "DOMAIN_ERROR"

    def __init__(self, message: str, **info):
        super().__init__(message)
        self.info = dict(info)

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self), **self.info}


class InfeasibleWindowError(DomainError):
    """Window ratio too small for the requested tolerance."""

    code = "INFEASIBLE_WINDOW"


class ApproxNotReachedError(DomainError):
    """A-posteriori error check failed at the window's degree ceiling."""

    code = "APPROX_NOT_REACHED"


class DegreeCapError(DomainError):
    """Degree above the float-mode cap; rerun in exact-rational mode."""

    code = "DEGREE_CAP"


class NoFeasibleWitnessError(DomainError):
    """No witness index passed the feasibility prechecks within the horizon."""

    code = "NO_FEASIBLE_WITNESS"


class OverlapError(DomainError):
    """Appended block does not start strictly beyond the current degree."""

    code = "OVERLAP"


class LPSolveError(DomainError):
    """Minimax LP failed (unbounded / cycling / numerical breakdown)."""

    code = "LP_FAILURE"

    def __init__(self, message: str, code: str = "LP_FAILURE", **info):
        super().__init__(message, **info)
        self.code = code


class UsageError(DomainError):
    """Bad flag/argument combination (CLI exit status 2)."""

    code = "USAGE"
