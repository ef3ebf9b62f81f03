"""Monte Carlo coverage at the typical location in two fidelity modes.

ShotNoise draws (r1, r2) from their joint law and the interference from the
marked shot-noise model. FullVoronoi places the BSs and one user per cell,
applies the policy to every user and sums exact per-interferer powers.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from coopnet.channel import coherent_sum
from coopnet.errors import SamplingError
from coopnet.geometry import (
    Action,
    PolicyParams,
    no_coop_mask,
    policy_action,
    sample_ppp,
    sample_users_in_cells,
    two_nearest,
    two_nearest_many,
)
from coopnet.geometry.point_process import SeedLike, as_generator
from coopnet.interference import sample_interference
from coopnet.settings import thread_limit

from .config import SimConfig, SimEstimate, SimMode
from .rng import block_generator, block_ranges, realization_generator


@dataclass(frozen=True)
class _BlockTally:
    hits: int
    n_effective: int
    no_coop: int


def _shot_noise_sinr(config: SimConfig, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    params = config.params
    beta = params.beta
    # λπ r2² ~ Gamma(2, 1) and r1/r2 has density 2v on [0, 1].
    u = rng.gamma(2.0, 1.0, size=n)
    r2 = np.sqrt(u / (params.intensity * np.pi))
    r1 = np.sqrt(rng.random(n)) * r2
    no_coop = no_coop_mask(r1, r2, config.rho)

    g1 = rng.exponential(params.power, size=n)
    g2 = rng.exponential(params.power, size=n)
    signal = np.where(no_coop, g1 * np.power(r1, -beta), 0.5 * coherent_sum(g1, g2, r1, r2, beta))
    include_boundary = no_coop | (not config.dpc)
    interference = sample_interference(
        r2,
        config.rho,
        params,
        rng,
        size=n,
        include_boundary=include_boundary,
        outer_radius=config.outer_radius,
        compensate_tail=config.compensate_tail,
    )
    return signal / (params.noise + interference), no_coop


def _full_voronoi_sinr(config: SimConfig, rng: np.random.Generator) -> tuple[float, bool] | None:
    """One FullVoronoi realization; ``None`` when the window holds fewer than two atoms."""
    params = config.params
    beta, power = params.beta, params.power
    window = config.resolved_window
    pattern = sample_ppp(params.intensity, window, rng)
    if len(pattern) < 2:
        return None

    center = np.asarray(window.center, dtype=float)
    pair = two_nearest(pattern, center)
    served_alone = policy_action(pair, PolicyParams(config.rho)) is Action.NO_COOP
    g1, g2 = rng.exponential(power, size=2)
    if served_alone:
        signal = g1 * pair.r1**-beta
    else:
        signal = 0.5 * coherent_sum(g1, g2, pair.r1, pair.r2, beta)

    distances = np.hypot(*(pattern.atoms - center).T)
    interferers = np.flatnonzero(np.arange(len(pattern)) != pair.first_index)
    cancelled = config.dpc and not served_alone
    if cancelled:
        interferers = interferers[interferers != pair.second_index]

    interference = 0.0
    if len(interferers):
        users = sample_users_in_cells(pattern, rng, interferers)
        neighbours, user_distances = two_nearest_many(pattern, users)
        alone = no_coop_mask(user_distances[:, 0], user_distances[:, 1], config.rho)
        partners = neighbours[:, 1]

        gj = rng.exponential(power, size=len(interferers))
        gk = rng.exponential(power, size=len(interferers))
        phase = rng.uniform(0.0, 2.0 * np.pi, size=len(interferers)) - rng.uniform(0.0, 2.0 * np.pi, size=len(interferers))
        hj = gj * np.power(distances[interferers], -beta)
        hk = gk * np.power(distances[partners], -beta)
        if cancelled:
            # DPC removes everything the second neighbour emits, secondary users included.
            hk = np.where(partners == pair.second_index, 0.0, hk)
        joint = 0.5 * (hj + hk) + np.sqrt(hj * hk) * np.cos(phase)
        interference = float(np.where(alone, hj, joint).sum())
    return signal / (params.noise + interference), served_alone


def _policy_only(config: SimConfig, rng: np.random.Generator) -> bool | None:
    pattern = sample_ppp(config.params.intensity, config.resolved_window, rng)
    if len(pattern) < 2:
        return None
    pair = two_nearest(pattern, np.asarray(config.resolved_window.center, dtype=float))
    return policy_action(pair, PolicyParams(config.rho)) is Action.NO_COOP


def _run_block(config: SimConfig, block: int, start: int, stop: int, policy_only: bool = False) -> _BlockTally:
    threshold = config.params.threshold
    if policy_only:
        outcomes = [_policy_only(config, realization_generator(config.seed, index)) for index in range(start, stop)]
        drawn = [alone for alone in outcomes if alone is not None]
        return _BlockTally(0, len(drawn), sum(drawn))
    if config.mode is SimMode.SHOT_NOISE:
        sinr, no_coop = _shot_noise_sinr(config, block_generator(config.seed, block), stop - start)
        return _BlockTally(int(np.count_nonzero(sinr > threshold)), stop - start, int(no_coop.sum()))

    hits = effective = alone = 0
    for index in range(start, stop):
        outcome = _full_voronoi_sinr(config, realization_generator(config.seed, index))
        if outcome is None:
            continue
        sinr, served_alone = outcome
        effective += 1
        hits += int(sinr > threshold)
        alone += int(served_alone)
    return _BlockTally(hits, effective, alone)


def _tally(config: SimConfig, policy_only: bool = False) -> _BlockTally:
    logger = logging.getLogger(__name__)
    blocks = block_ranges(config.realizations, config.block_size)
    workers = min(config.workers or thread_limit(), len(blocks))
    started = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(_run_block, *zip(*[(config, *block, policy_only) for block in blocks])))
    else:
        tallies = [_run_block(config, *block, policy_only) for block in blocks]

    total = _BlockTally(
        sum(t.hits for t in tallies),
        sum(t.n_effective for t in tallies),
        sum(t.no_coop for t in tallies),
    )
    logger.info(
        f"{config.mode.value}: {config.realizations:,} realizations ({total.n_effective:,} effective) "
        f"in {len(blocks)} blocks on {workers} worker(s), {time.perf_counter() - started:.1f}s"
    )
    return total


def simulate_sinr_once(config: SimConfig, seed: SeedLike) -> float:
    """SINR at the typical location for one realization of ``config``'s model."""
    rng = as_generator(seed)
    if config.mode is SimMode.SHOT_NOISE:
        sinr, _ = _shot_noise_sinr(config, rng, 1)
        return float(sinr[0])
    outcome = _full_voronoi_sinr(config, rng)
    if outcome is None:
        raise SamplingError("the sampled pattern has fewer than two atoms")
    return float(outcome[0])


def simulate_coverage(config: SimConfig) -> SimEstimate:
    """Fraction of realizations with SINR > T and its binomial standard error."""
    total = _tally(config)
    return SimEstimate.from_counts(total.hits, total.n_effective)


def measure_policy_fraction(config: SimConfig) -> float:
    """Empirical frequency of NoCoop at the typical location over FullVoronoi realizations."""
    if config.mode is not SimMode.FULL_VORONOI:
        raise ValueError("measure_policy_fraction requires FullVoronoi mode")
    total = _tally(config, policy_only=True)
    if total.n_effective == 0:
        raise SamplingError("no realization had the two atoms needed to apply the policy")
    return total.no_coop / total.n_effective


def policy_fraction_stderr(fraction: float, n_effective: int) -> float:
    return math.sqrt(fraction * (1.0 - fraction) / n_effective)
