"""Classical nearest-BS coverage with exponential interferer marks, by nested adaptive quadrature.

This path shares no code with the cooperative integral and serves as its
cross-check at ρ = 1.
"""
from __future__ import annotations

import logging
import math
import warnings

from scipy import integrate

from coopnet.errors import QuadratureError
from coopnet.settings import SystemParams

from .coverage import CoverageMethod, CoverageResult, checked_probability

_TOLERANCE = 1e-10


def _quad(func, lo: float, hi: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            return integrate.quad(func, lo, hi, epsabs=_TOLERANCE, epsrel=_TOLERANCE, limit=400)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"reference coverage quadrature on [{lo}, {hi}] failed: {exc}", math.nan) from exc


def interference_exponent(threshold: float, beta: float) -> tuple[float, float]:
    """∫_1^∞ x / (1 + x^β / T) dx: the interference integral in units of r1²."""
    return _quad(lambda x: x / (1.0 + x**beta / threshold), 1.0, math.inf)


def reference_nocoop_coverage(params: SystemParams) -> CoverageResult:
    """P[g1 r1^-β > T(σ² + I)] for the typical location served by its nearest BS.

    Every atom beyond r1 interferes with an exponential (mean p) mark, so the
    Laplace functional of the field reduces to exp(-2πλ r1² ∫_1^∞ x/(1+x^β/T) dx).
    """
    lam, beta, power = params.intensity, params.beta, params.power
    threshold, noise = params.threshold, params.noise
    exponent, exponent_error = interference_exponent(threshold, beta)

    def integrand(r1: float) -> float:
        return (
            2.0 * math.pi * lam * r1
            * math.exp(-math.pi * lam * r1**2 * (1.0 + 2.0 * exponent))
            * math.exp(-threshold * noise * r1**beta / power)
        )

    value, error = _quad(integrand, 0.0, math.inf)
    logging.getLogger(__name__).debug(f"reference coverage at T={threshold:g}: {value:.8f} (+/- {error:.1e})")
    coverage = checked_probability(value, {"interference_exponent": exponent})
    return CoverageResult(
        coverage,
        CoverageMethod.REFERENCE,
        error + exponent_error,
        {"interference_exponent": exponent},
    )
