"""Coverage probability of the typical location under the ρ-policy.

The coverage integral is taken over the ordered neighbour distances after the
substitutions v = r1/r2 and t² = λπ r2², which turn the joint density into
2v · 2t³ e^(-t²). The NoCoop kernel is a closed form of ℒ_I at a real argument;
the FullCoop kernel inverts the characteristic function of Z/(2T) - σ² - I.
"""
from __future__ import annotations

import logging
import math
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

import numpy as np

from coopnet.channel import ZLaplaceParams, z_laplace, z_mean
from coopnet.errors import CoverageRangeError, QuadratureError
from coopnet.geometry import PolicyParams
from coopnet.interference import InterferenceTransform, interference_laplace, interference_laplace_dpc
from coopnet.settings import SystemParams

from .quadrature import QuadratureConfig, gauss_legendre, panel_rule

_RANGE_SLACK = 1e-6


class CoverageMethod(str, Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte_carlo"
    REFERENCE = "reference"


@dataclass(frozen=True)
class CoverageResult:
    """A coverage probability with its method tag and absolute error estimate."""

    coverage: float
    method: CoverageMethod
    error_estimate: float
    diagnostics: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 <= self.coverage <= 1.0:
            raise ValueError(f"coverage must lie in [0, 1], got {self.coverage}")
        if self.error_estimate < 0:
            raise ValueError(f"error_estimate must be non-negative, got {self.error_estimate}")


def checked_probability(value: float, diagnostics: Mapping[str, Any] | None = None) -> float:
    """Clamp float residue around [0, 1]; anything further out is a numerical failure."""
    if not math.isfinite(value) or value < -_RANGE_SLACK or value > 1.0 + _RANGE_SLACK:
        raise CoverageRangeError(f"coverage {value!r} lies outside [0, 1]", diagnostics)
    return min(max(float(value), 0.0), 1.0)


def _check_distances(r1: float, r2: float) -> None:
    if not (0.0 < r1 <= r2 and math.isfinite(r2)):
        raise ValueError(f"conditional coverage needs 0 < r1 <= r2, got r1={r1}, r2={r2}")


def _nocoop_kernel(ratios, r2, rho: float, params: SystemParams, cancel_boundary: bool) -> np.ndarray:
    s = np.power(ratios * r2, params.beta) * params.threshold / params.power
    transform = InterferenceTransform.build(s, r2, params)
    return np.exp(-s * params.noise) * transform.laplace(rho, dpc=cancel_boundary).real


@dataclass(frozen=True)
class _SGrid:
    """Quadrature nodes in s for one r2 and the ρ-independent pieces of ℒ_I(2iπs)."""

    s: np.ndarray
    weights: np.ndarray
    transform: InterferenceTransform
    tail_bound: float


def _build_s_grid(r2: float, ratio_floor: float, params: SystemParams, config: QuadratureConfig, dpc: bool) -> _SGrid:
    beta, power = params.beta, params.power
    rate_sum = power * ((ratio_floor * r2) ** -beta + r2**-beta)
    scales = [params.threshold / (math.pi * rate_sum), r2**beta / (2.0 * math.pi * power)]
    period = math.inf
    if params.noise > 0:
        period = 1.0 / params.noise
        scales.append(period)
    start = config.first_panel_fraction * min(scales)

    nodes, weights, parts = [], [], []
    edges = [0.0, start]
    while True:
        for _ in range(config.panels_per_batch):
            last = edges[-1]
            edges.append(last + min(last * (config.s_growth - 1.0), period))
        s, w = panel_rule(edges, config.s_nodes)
        part = InterferenceTransform.build(2j * np.pi * s, r2, params)
        nodes.append(s)
        weights.append(w)
        parts.append(part)
        bound = float(part.envelope(dpc)[-1]) / math.pi
        if bound <= config.inner_tolerance:
            break
        if edges[-1] > config.s_cap:
            raise QuadratureError(
                f"FullCoop inversion did not converge below s={config.s_cap:g} for r2={r2:.4g}",
                bound,
                {"r2": r2, "s_max": edges[-1]},
            )
        edges = edges[-1:]
    return _SGrid(np.concatenate(nodes), np.concatenate(weights), InterferenceTransform.concatenate(parts), bound)


def _fullcoop_kernel(ratios, r2: float, grid: _SGrid, rho: float, params: SystemParams, dpc: bool) -> np.ndarray:
    """2·Re ∫_0^∞ e^(-2iπσ²s) ℒ_I(2iπs) (ℒ_Z(-iπs/T) - 1)/(2iπs) ds for each ratio v = r1/r2."""
    ratios = np.atleast_1d(np.asarray(ratios, dtype=float))
    s = grid.s
    mu1 = np.power(ratios * r2, params.beta)[:, None] / params.power
    mu2 = r2**params.beta / params.power
    lz = z_laplace((-1j * np.pi / params.threshold) * s, ZLaplaceParams(mu1, mu2))
    lap_i = grid.transform.laplace(rho, dpc=dpc)
    weights = grid.weights * np.exp(-2j * np.pi * params.noise * s) * lap_i / (2j * np.pi * s)
    return 2.0 * ((lz - 1.0) @ weights).real


def conditional_coverage_nocoop(r1: float, r2: float, params: SystemParams, rho: float = 1.0, dpc: bool = False) -> float:
    """P[SINR > T | r1, r2] when the typical location is served by its nearest BS alone.

    ``dpc`` cancels the boundary interferer at r2; coverage_probability sets it
    only under the literal reading where DPC applies to both terms.
    """
    _check_distances(r1, r2)
    PolicyParams(rho)
    s = r1**params.beta * params.threshold / params.power
    laplace = interference_laplace_dpc if dpc else interference_laplace
    value = math.exp(-s * params.noise) * laplace(s, rho, r2, params).real
    return checked_probability(value, {"r1": r1, "r2": r2})


def conditional_coverage_fullcoop(
    r1: float,
    r2: float,
    params: SystemParams,
    rho: float = 0.0,
    dpc: bool = False,
    config: QuadratureConfig | None = None,
) -> float:
    """P[Z/2 > T(σ² + I) | r1, r2] by Fourier inversion folded onto s ≥ 0."""
    _check_distances(r1, r2)
    PolicyParams(rho)
    config = config or QuadratureConfig()
    grid = _build_s_grid(r2, r1 / r2, params, config, dpc)
    value = float(_fullcoop_kernel([r1 / r2], r2, grid, rho, params, dpc)[0])
    return checked_probability(value, {"r1": r1, "r2": r2, "s_max": float(grid.s[-1])})


def fullcoop_integrand(s, r1: float, r2: float, params: SystemParams, rho: float = 0.0, dpc: bool = False):
    """The unfolded inversion integrand at s > 0 (complex)."""
    _check_distances(r1, r2)
    s = np.asarray(s, dtype=float)
    lz = z_laplace((-1j * np.pi / params.threshold) * s, ZLaplaceParams.from_distances(r1, r2, params.power, params.beta))
    lap_i = InterferenceTransform.build(2j * np.pi * s, r2, params).laplace(rho, dpc=dpc)
    value = np.exp(-2j * np.pi * params.noise * s) * lap_i * (lz - 1.0) / (2j * np.pi * s)
    return complex(value) if np.ndim(value) == 0 else value


def fullcoop_integrand_at_zero(r1: float, r2: float, params: SystemParams) -> float:
    """Removable-singularity value of the inversion integrand at s = 0: E[Z]/(2T)."""
    mu = ZLaplaceParams.from_distances(r1, r2, params.power, params.beta)
    return z_mean(mu) / (2.0 * params.threshold)


def _radial_weights(config: QuadratureConfig, intensity: float) -> tuple[np.ndarray, np.ndarray]:
    t, wt = config.radial_rule
    return t / math.sqrt(intensity * math.pi), wt * 2.0 * t**3 * np.exp(-(t**2))


def region_masses(rho: float, config: QuadratureConfig | None = None) -> tuple[float, float]:
    """Mass of the joint distance density on {r1 ≤ ρ r2} and {ρ r2 < r1 ≤ r2}.

    Evaluated with the same outer rule as the coverage integral; the masses do
    not depend on λ.
    """
    PolicyParams(rho)
    config = config or QuadratureConfig()
    _, radial = _radial_weights(config, 1.0)
    outer = float(radial.sum())
    masses = []
    for lo, hi in ((0.0, rho), (rho, 1.0)):
        if hi <= lo:
            masses.append(0.0)
            continue
        v, wv = gauss_legendre(lo, hi, config.ratio_nodes)
        masses.append(outer * float(2.0 * v @ wv))
    return masses[0], masses[1]


class CoverageIntegrator:
    """Evaluates q(ρ) for one SystemParams, caching the ρ-independent FullCoop pieces.

    The s-grids and interference transforms of the FullCoop kernel depend on
    (r2, DPC) only, so repeated evaluations over ρ reuse them.
    """

    def __init__(self, params: SystemParams, config: QuadratureConfig | None = None) -> None:
        self.params = params
        self.config = config or QuadratureConfig()
        self._grids: dict[tuple[QuadratureConfig, bool], list[_SGrid]] = {}
        self._lock = threading.Lock()

    def _fullcoop_grids(self, config: QuadratureConfig, dpc: bool) -> list[_SGrid]:
        key = (config, dpc)
        with self._lock:
            if key not in self._grids:
                logger = logging.getLogger(__name__)
                started = time.perf_counter()
                r2_nodes, _ = _radial_weights(config, self.params.intensity)
                ratio_floor = float(gauss_legendre(0.0, 1.0, config.ratio_nodes)[0].min())
                self._grids[key] = [_build_s_grid(float(r2), ratio_floor, self.params, config, dpc) for r2 in r2_nodes]
                sizes = [len(grid.s) for grid in self._grids[key]]
                logger.debug(
                    f"Built FullCoop s-grids (dpc={dpc}) for {len(sizes)} radii: "
                    f"{sum(sizes):,} nodes in {time.perf_counter() - started:.2f}s"
                )
            return self._grids[key]

    def _integrate(self, rho: float, dpc: bool, dpc_both_terms: bool, config: QuadratureConfig) -> tuple[float, dict]:
        r2, radial = _radial_weights(config, self.params.intensity)
        no_coop_term = 0.0
        full_coop_term = 0.0
        tail = 0.0
        if rho > 0:
            v, wv = gauss_legendre(0.0, rho, config.ratio_nodes)
            kernel = _nocoop_kernel(v[None, :], r2[:, None], rho, self.params, dpc and dpc_both_terms)
            no_coop_term = float(radial @ (kernel @ (2.0 * v * wv)))
        if rho < 1:
            v, wv = gauss_legendre(rho, 1.0, config.ratio_nodes)
            grids = self._fullcoop_grids(config, dpc)
            kernel = np.stack([_fullcoop_kernel(v, float(r), grid, rho, self.params, dpc) for r, grid in zip(r2, grids)])
            full_coop_term = float(radial @ (kernel @ (2.0 * v * wv)))
            tail = float(radial @ np.array([grid.tail_bound for grid in grids]))
        diagnostics = {
            "no_coop_term": no_coop_term,
            "full_coop_term": full_coop_term,
            "kernel_evaluations": len(r2) * config.ratio_nodes * (int(rho > 0) + int(rho < 1)),
            "r2_max": float(r2.max()),
            "s_tail_bound": tail,
        }
        return no_coop_term + full_coop_term, diagnostics

    def evaluate(self, rho: float, dpc: bool = False, dpc_both_terms: bool = False) -> CoverageResult:
        PolicyParams(rho)
        value, diagnostics = self._integrate(rho, dpc, dpc_both_terms, self.config)
        if self.config.estimate_error:
            coarse, _ = self._integrate(rho, dpc, dpc_both_terms, self.config.coarse())
            error = abs(value - coarse) + diagnostics["s_tail_bound"]
        else:
            error = self.config.outer_tolerance
        diagnostics["rho"] = rho
        diagnostics["dpc"] = dpc
        coverage = checked_probability(value, diagnostics)
        logging.getLogger(__name__).debug(
            f"q(rho={rho:.4f}, dpc={dpc}) = {coverage:.6f} at T={self.params.threshold:g} (error {error:.1e})"
        )
        return CoverageResult(coverage, CoverageMethod.ANALYTIC, error, diagnostics)

    def coverage(self, rho: float, dpc: bool = False, dpc_both_terms: bool = False) -> float:
        """q(ρ) without the error estimate; used by the optimizer."""
        PolicyParams(rho)
        value, diagnostics = self._integrate(rho, dpc, dpc_both_terms, self.config)
        return checked_probability(value, diagnostics)


def coverage_probability(
    params: SystemParams,
    rho: float,
    dpc: bool = False,
    dpc_both_terms: bool = False,
    *,
    config: QuadratureConfig | None = None,
) -> CoverageResult:
    """Coverage of the typical location: NoCoop over {r1 ≤ ρ r2}, FullCoop elsewhere.

    DPC removes the second neighbour's interference from the FullCoop term only,
    unless ``dpc_both_terms`` requests it in the NoCoop term as well.
    """
    return CoverageIntegrator(params, config).evaluate(rho, dpc, dpc_both_terms)


def coverage_gain(
    params: SystemParams,
    rho: float,
    dpc: bool = False,
    *,
    integrator: CoverageIntegrator | None = None,
) -> float:
    """q(ρ) - q(1): coverage gained over never cooperating."""
    integrator = integrator or CoverageIntegrator(params)
    return integrator.coverage(rho, dpc) - integrator.coverage(1.0, dpc)
