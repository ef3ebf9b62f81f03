"""Choice of the policy parameter ρ maximizing coverage."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from coopnet.settings import SystemParams

from .coverage import CoverageIntegrator
from .quadrature import QuadratureConfig

PHI_RATIO = 2.0 / (1.0 + math.sqrt(5.0))
DEFAULT_GRID_POINTS = 21
DEFAULT_RHO_TOLERANCE = 1e-3


@dataclass(frozen=True)
class RhoOptimum:
    rho_star: float
    coverage_at_star: float
    gain_vs_nocoop: float
    evaluations: int


def golden_section_max(func, lo: float, hi: float, tol: float = DEFAULT_RHO_TOLERANCE, max_iterations: int = 100):
    """Golden-section search for a maximum of ``func`` on [lo, hi].

    The bracket endpoints are compared against the converged interior value so
    that a maximum sitting on the boundary is returned exactly.

    Returns ``(argmax, maximum, evaluations)``.
    """
    x1 = hi - PHI_RATIO * (hi - lo)
    x2 = lo + PHI_RATIO * (hi - lo)
    f1, f2 = func(x1), func(x2)
    f_lo, f_hi = func(lo), func(hi)
    lo0, hi0 = lo, hi
    evaluations = 4
    for _ in range(max_iterations):
        if abs(hi - lo) <= tol:
            break
        if f2 < f1:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - PHI_RATIO * (hi - lo)
            f1 = func(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + PHI_RATIO * (hi - lo)
            f2 = func(x2)
        evaluations += 1

    best_x, best_f = (x1, f1) if f1 >= f2 else (x2, f2)
    if f_hi >= best_f and f_hi >= f_lo:
        return hi0, f_hi, evaluations
    if f_lo > best_f:
        return lo0, f_lo, evaluations
    return best_x, best_f, evaluations


def optimize_rho(
    params: SystemParams,
    dpc: bool = False,
    *,
    dpc_both_terms: bool = False,
    grid_points: int = DEFAULT_GRID_POINTS,
    tol: float = DEFAULT_RHO_TOLERANCE,
    integrator: CoverageIntegrator | None = None,
    config: QuadratureConfig | None = None,
) -> RhoOptimum:
    """Maximize q(ρ) over [0, 1]: a coarse grid, then golden section around the best point."""
    if grid_points < 3:
        raise ValueError(f"grid_points must be at least 3, got {grid_points}")
    logger = logging.getLogger(__name__)
    integrator = integrator or CoverageIntegrator(params, config)

    def q(rho: float) -> float:
        return integrator.coverage(float(rho), dpc, dpc_both_terms)

    grid = np.linspace(0.0, 1.0, grid_points)
    values = np.array([q(rho) for rho in grid])
    best = int(np.argmax(values))
    no_coop = float(values[-1])
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid_points - 1)]
    rho_star, coverage_star, refinements = golden_section_max(q, float(lo), float(hi), tol)
    if coverage_star < values[best]:
        rho_star, coverage_star = float(grid[best]), float(values[best])

    logger.info(
        f"T={params.threshold:g} dpc={dpc}: rho*={rho_star:.4f}, q={coverage_star:.6f}, "
        f"gain vs NoCoop={coverage_star - no_coop:+.4f}"
    )
    return RhoOptimum(
        rho_star=float(rho_star),
        coverage_at_star=float(coverage_star),
        gain_vs_nocoop=float(coverage_star - no_coop),
        evaluations=grid_points + refinements,
    )
