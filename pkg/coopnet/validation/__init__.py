"""Invariant suite behind the ``validate`` command."""

from .checks import CheckResult, run_validation_suite

__all__ = ["CheckResult", "run_validation_suite"]
