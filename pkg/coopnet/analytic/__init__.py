"""Analytic coverage probability, its conditional kernels and the ρ optimizer."""

from .coverage import (
    CoverageIntegrator,
    CoverageMethod,
    CoverageResult,
    checked_probability,
    conditional_coverage_fullcoop,
    conditional_coverage_nocoop,
    coverage_gain,
    coverage_probability,
    fullcoop_integrand,
    fullcoop_integrand_at_zero,
    region_masses,
)
from .optimize import RhoOptimum, golden_section_max, optimize_rho
from .quadrature import QuadratureConfig, gauss_legendre, panel_rule
from .reference import interference_exponent, reference_nocoop_coverage

__all__ = [
    "CoverageIntegrator",
    "CoverageMethod",
    "CoverageResult",
    "QuadratureConfig",
    "RhoOptimum",
    "checked_probability",
    "conditional_coverage_fullcoop",
    "conditional_coverage_nocoop",
    "coverage_gain",
    "coverage_probability",
    "fullcoop_integrand",
    "fullcoop_integrand_at_zero",
    "gauss_legendre",
    "golden_section_max",
    "interference_exponent",
    "optimize_rho",
    "panel_rule",
    "reference_nocoop_coverage",
    "region_masses",
]
