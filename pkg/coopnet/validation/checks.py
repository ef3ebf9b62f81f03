"""Self-checks of the transforms, the coverage integral and the samplers."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from coopnet.analytic import (
    conditional_coverage_fullcoop,
    coverage_probability,
    reference_nocoop_coverage,
    region_masses,
)
from coopnet.channel import ZLaplaceParams, laplace_order_holds, sample_z, z_laplace, z_mean
from coopnet.geometry import expected_r2, sample_ppp, two_nearest
from coopnet.interference import interference_laplace, interference_mean, sample_interference
from coopnet.settings import DEFAULT_PARAMS, SystemParams
from coopnet.simulation import SimConfig, SimMode, default_window, measure_policy_fraction

MC_SIGMAS = 3.0
_DERIVATIVE_STEP = 1e-5


@dataclass(frozen=True)
class CheckResult:
    check: str
    value: float
    expected: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(abs(self.value - self.expected) <= self.tolerance)


def _transform_checks(params: SystemParams) -> list[CheckResult]:
    mu = ZLaplaceParams(1.0, 1.0)
    h = _DERIVATIVE_STEP
    z_slope = -(z_laplace(h, mu).real - z_laplace(-h, mu).real) / (2.0 * h)
    r2 = 0.5
    i_slope = -(
        interference_laplace(h, 0.5, r2, params).real - interference_laplace(-h, 0.5, r2, params).real
    ) / (2.0 * h)
    s_grid = np.logspace(-3, 3, 30)
    return [
        CheckResult("z_laplace_at_zero", z_laplace(0.0, mu).real, 1.0, 0.0),
        CheckResult("interference_laplace_at_zero", interference_laplace(0.0, 0.5, r2, params).real, 1.0, 0.0),
        CheckResult("laplace_order_equal_rates", float(laplace_order_holds(1.0, s_grid)), 1.0, 0.0),
        CheckResult("z_laplace_slope_is_mean", z_slope, z_mean(mu), 1e-3 * z_mean(mu)),
        CheckResult(
            "interference_laplace_slope_is_mean",
            i_slope,
            interference_mean(r2, params),
            1e-3 * interference_mean(r2, params),
        ),
    ]


def _integral_checks(params: SystemParams, thresholds: tuple[float, ...]) -> list[CheckResult]:
    results = []
    for rho in (0.2, 0.5, 0.9):
        no_coop, full_coop = region_masses(rho)
        results.append(CheckResult(f"region_mass_total_rho={rho}", no_coop + full_coop, 1.0, 1e-6))
        results.append(CheckResult(f"region_mass_no_coop_rho={rho}", no_coop, rho**2, 1e-6))
    for threshold in thresholds:
        local = params.with_threshold(threshold)
        analytic = coverage_probability(local, 1.0).coverage
        reference = reference_nocoop_coverage(local).coverage
        results.append(CheckResult(f"no_coop_matches_reference_T={threshold:g}", analytic, reference, 1e-3))
    return results


def _monte_carlo_checks(params: SystemParams, samples: int, seed: int) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []

    window = default_window(params.intensity)
    r2_draws = []
    while len(r2_draws) < samples:
        pattern = sample_ppp(params.intensity, window, rng)
        if len(pattern) >= 2:
            r2_draws.append(two_nearest(pattern, window.center).r2)
    r2_draws = np.asarray(r2_draws)
    results.append(
        CheckResult(
            "mean_second_neighbour_distance",
            float(r2_draws.mean()),
            expected_r2(params.intensity),
            MC_SIGMAS * float(r2_draws.std(ddof=1)) / math.sqrt(samples),
        )
    )

    for rho in (0.2, 0.5, 0.9):
        config = SimConfig(params=params, rho=rho, mode=SimMode.FULL_VORONOI, realizations=samples, seed=seed, workers=1)
        fraction = measure_policy_fraction(config)
        sigma = math.sqrt(rho**2 * (1.0 - rho**2) / samples)
        results.append(CheckResult(f"no_coop_frequency_rho={rho}", fraction, rho**2, MC_SIGMAS * sigma))

    for rho in (0.0, 0.5, 1.0):
        draws = sample_interference(1.0, rho, params, rng, size=10 * samples)
        sigma = float(draws.std(ddof=1)) / math.sqrt(len(draws))
        results.append(
            CheckResult(f"interference_mean_rho={rho}", float(draws.mean()), interference_mean(1.0, params), MC_SIGMAS * sigma)
        )

    r1, r2, threshold = 0.3, 0.4, 1.0
    local = params.with_threshold(threshold)
    n = 100 * samples
    z = sample_z(r1, r2, local.power, rng, beta=local.beta, size=n)
    interference = sample_interference(r2, 0.0, local, rng, size=n)
    hits = 0.5 * z > threshold * (local.noise + interference)
    estimate = float(hits.mean())
    sigma = math.sqrt(max(estimate * (1.0 - estimate), 1.0 / n) / n)
    results.append(
        CheckResult(
            "fullcoop_inversion_matches_sampling",
            conditional_coverage_fullcoop(r1, r2, local, rho=0.0),
            estimate,
            MC_SIGMAS * sigma,
        )
    )
    return results


def run_validation_suite(
    params: SystemParams = DEFAULT_PARAMS,
    *,
    thresholds: tuple[float, ...] = (0.1, 0.5, 1.0, 2.0, 5.0),
    samples: int = 2_000,
    seed: int = 0,
) -> pd.DataFrame:
    """Run every check and return one row per check with a ``passed`` column."""
    logger = logging.getLogger(__name__)
    checks = _transform_checks(params) + _integral_checks(params, thresholds)
    if samples > 0:
        checks += _monte_carlo_checks(params, samples, seed)
    frame = pd.DataFrame(
        {
            "check": [c.check for c in checks],
            "value": [c.value for c in checks],
            "expected": [c.expected for c in checks],
            "tolerance": [c.tolerance for c in checks],
            "passed": [c.passed for c in checks],
        }
    )
    failed = frame.loc[~frame["passed"], "check"].tolist()
    if failed:
        logger.warning(f"{len(failed)} of {len(frame)} checks failed: {', '.join(failed)}")
    else:
        logger.info(f"All {len(frame)} checks passed")
    return frame
