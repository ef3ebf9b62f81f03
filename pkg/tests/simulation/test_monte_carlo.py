import math

import numpy as np
import pytest

from coopnet.analytic import reference_nocoop_coverage
from coopnet.channel import coherent_sum
from coopnet.geometry import Window
from coopnet.settings import DEFAULT_PARAMS, PRESET_REALIZATIONS
from coopnet.simulation import (
    SimConfig,
    SimEstimate,
    SimMode,
    measure_policy_fraction,
    preset_config,
    policy_fraction_stderr,
    realization_generator,
    simulate_coverage,
    simulate_sinr_once,
)
from coopnet.simulation import monte_carlo


def test_identical_configs_give_identical_estimates():
    config = SimConfig(rho=0.5, realizations=5_000, seed=3, workers=1, block_size=1000)
    assert simulate_coverage(config) == simulate_coverage(config)


def test_estimate_does_not_depend_on_worker_count():
    config = SimConfig(rho=0.5, realizations=3_000, seed=9, workers=1, block_size=500)
    parallel = SimConfig(rho=0.5, realizations=3_000, seed=9, workers=2, block_size=500)
    assert simulate_coverage(config) == simulate_coverage(parallel)


def test_realization_streams_are_independent_of_each_other():
    first = realization_generator(7, 0).random(4)
    again = realization_generator(7, 0).random(4)
    other = realization_generator(7, 1).random(4)
    np.testing.assert_array_equal(first, again)
    assert not np.allclose(first, other)


def test_tiny_threshold_is_always_covered():
    config = SimConfig(params=DEFAULT_PARAMS.with_threshold(1e-9), rho=0.5, realizations=2_000, workers=1)
    assert simulate_coverage(config).coverage == 1.0


def test_shot_noise_without_cooperation_matches_reference():
    estimate = simulate_coverage(SimConfig(rho=1.0, realizations=100_000, seed=2, workers=1))
    reference = reference_nocoop_coverage(DEFAULT_PARAMS).coverage
    assert abs(estimate.coverage - reference) <= 4.0 * estimate.stderr + 2e-4


def test_full_cooperation_signal_is_half_the_coherent_sum(monkeypatch):
    monkeypatch.setattr(monte_carlo, "sample_interference", lambda r2, *args, **kwargs: np.zeros(np.shape(r2)))
    config = SimConfig(rho=0.0, realizations=1)
    sinr = simulate_sinr_once(config, 7)

    rng = np.random.default_rng(7)
    r2 = math.sqrt(rng.gamma(2.0, 1.0, size=1)[0] / math.pi)
    r1 = math.sqrt(rng.random(1)[0]) * r2
    g1 = rng.exponential(1.0, size=1)[0]
    g2 = rng.exponential(1.0, size=1)[0]
    assert sinr == pytest.approx(0.5 * coherent_sum(g1, g2, r1, r2, 4.0))


def test_dpc_never_lowers_coupled_coverage():
    params = DEFAULT_PARAMS.with_threshold(0.5)
    plain = simulate_coverage(SimConfig(params=params, rho=0.5, realizations=20_000, seed=4, workers=1))
    cancelled = simulate_coverage(SimConfig(params=params, rho=0.5, dpc=True, realizations=20_000, seed=4, workers=1))
    assert cancelled.coverage >= plain.coverage


@pytest.mark.parametrize("rho, expected", [(0.0, 0.0), (1.0, 1.0), (0.6, 0.36)])
def test_policy_frequency_in_full_voronoi(rho, expected):
    config = SimConfig(rho=rho, mode=SimMode.FULL_VORONOI, realizations=3_000, seed=6, workers=1)
    fraction = measure_policy_fraction(config)
    stderr = policy_fraction_stderr(expected, config.realizations)
    assert abs(fraction - expected) <= 4.0 * stderr


def test_policy_frequency_needs_full_voronoi():
    with pytest.raises(ValueError):
        measure_policy_fraction(SimConfig(rho=0.5, realizations=10))


def test_full_voronoi_agrees_with_shot_noise_without_cooperation():
    full = simulate_coverage(SimConfig(rho=1.0, mode=SimMode.FULL_VORONOI, realizations=1_500, seed=5, workers=1))
    shot = simulate_coverage(SimConfig(rho=1.0, realizations=20_000, seed=5, workers=1))
    assert abs(full.coverage - shot.coverage) <= max(4.0 * math.hypot(full.stderr, shot.stderr), 0.02)
    assert full.n_effective <= 1_500


def test_full_voronoi_places_users_in_every_realization():
    config = SimConfig(rho=0.0, mode=SimMode.FULL_VORONOI, realizations=1)
    sinrs = [simulate_sinr_once(config, realization_generator(5, index)) for index in range(200)]
    assert min(sinrs) > 0.0


@pytest.mark.parametrize("rho, dpc", [(0.0, False), (0.5, False), (0.5, True)])
def test_full_voronoi_exact_pairs_do_not_beat_the_shot_noise_model(rho, dpc):
    # Same truncation on both sides: the window's half extent and no far-field term.
    full = simulate_coverage(
        SimConfig(rho=rho, dpc=dpc, mode=SimMode.FULL_VORONOI, realizations=1_000, seed=7, workers=1)
    )
    shot = simulate_coverage(
        SimConfig(rho=rho, dpc=dpc, realizations=20_000, seed=7, workers=1, outer_radius=5.0, compensate_tail=False)
    )
    assert full.coverage <= shot.coverage + max(4.0 * math.hypot(full.stderr, shot.stderr), 0.02)
    assert 0.0 < full.coverage < 1.0


def test_full_voronoi_single_realization_is_positive():
    config = SimConfig(rho=0.5, mode=SimMode.FULL_VORONOI, realizations=1)
    assert simulate_sinr_once(config, 3) > 0.0


def test_full_voronoi_needs_enough_expected_atoms():
    with pytest.raises(ValueError):
        SimConfig(mode=SimMode.FULL_VORONOI, window=Window.with_area(4.0))


@pytest.mark.parametrize(
    "kwargs",
    [{"realizations": 0}, {"rho": 1.5}, {"seed": -1}, {"workers": 0}, {"outer_radius": 0.0}],
)
def test_sim_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimConfig(**kwargs)


def test_preset_config():
    config = preset_config(rho=0.4, seed=11)
    assert config.mode is SimMode.FULL_VORONOI
    assert config.realizations == PRESET_REALIZATIONS
    assert config.resolved_window.area == pytest.approx(20.0)
    assert not config.compensate_tail


def test_sim_estimate_from_counts():
    estimate = SimEstimate.from_counts(25, 100)
    assert estimate.coverage == 0.25
    assert estimate.stderr == pytest.approx(math.sqrt(0.25 * 0.75 / 100))
    with pytest.raises(ValueError):
        SimEstimate.from_counts(0, 0)
