"""Exception types raised across the package."""

from __future__ import annotations


class ApproxOpError(Exception):
    """Base class for all package errors."""


class DomainError(ApproxOpError, ValueError):
    """An argument lies outside the domain of the operation."""


class FeasibilityError(ApproxOpError):
    """The requested engine would exceed its work budget."""

    def __init__(self, message: str, required: int | None = None, alternatives=()):
        super().__init__(message)
        self.required = required
        self.alternatives = tuple(alternatives)


class StrategyError(ApproxOpError):
    """The requested engine does not support the given mapping or family."""


class EvaluationError(ApproxOpError):
    """A numerical evaluation did not converge; ``partial`` holds the best estimate."""

    def __init__(self, message: str, partial: float | None = None, error_estimate: float | None = None):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate


class SpecError(ApproxOpError):
    """An experiment configuration is malformed."""
