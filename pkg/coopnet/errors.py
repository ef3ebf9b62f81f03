"""Exceptions raised by numerical evaluations."""
from __future__ import annotations

from typing import Any, Mapping


class CoverageError(RuntimeError):
    """Base class for numerical failures; the CLI maps it to exit status 1."""

    def __init__(self, message: str, diagnostics: Mapping[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class QuadratureError(CoverageError):
    """A quadrature did not reach its tolerance or exceeded its integration cap."""

    def __init__(
        self,
        message: str,
        error_estimate: float,
        diagnostics: Mapping[str, Any] | None = None,
    ) -> None:
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})", diagnostics)
        self.error_estimate = error_estimate


class CoverageRangeError(CoverageError):
    """A coverage value fell outside [0, 1] by more than float noise."""


class TransformDomainError(CoverageError, ValueError):
    """A transform was evaluated on or too close to a pole or branch cut."""


class SamplingError(CoverageError, ValueError):
    """A Monte Carlo draw could not be completed."""
