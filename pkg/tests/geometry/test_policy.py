import math

import numpy as np
import pytest

from coopnet.geometry import (
    Action,
    NeighborPair,
    PolicyParams,
    Window,
    no_coop_mask,
    no_coop_probability,
    policy_action,
    sample_ppp,
    two_nearest,
)


@pytest.mark.parametrize(
    "r1, r2, rho, expected",
    [
        (1.0, 2.0, 0.6, Action.NO_COOP),
        (1.5, 2.0, 0.6, Action.FULL_COOP),
        (0.1, 5.0, 0.0, Action.FULL_COOP),
        (2.0, 2.0, 1.0, Action.NO_COOP),
        (2.0, 2.0, 0.99, Action.FULL_COOP),
    ],
)
def test_policy_action_examples(r1, r2, rho, expected):
    pair = NeighborPair(0, 1, r1, r2)
    assert policy_action(pair, PolicyParams(rho)) is expected


def test_action_split_values():
    assert Action.NO_COOP.split == 0.0
    assert Action.FULL_COOP.split == 0.5


@pytest.mark.parametrize("rho", [-0.1, 1.1, math.nan])
def test_policy_params_reject_out_of_range(rho):
    with pytest.raises(ValueError):
        PolicyParams(rho)


def test_no_coop_mask_matches_scalar_policy():
    r1 = np.array([0.1, 0.5, 0.9, 1.0])
    r2 = np.ones(4)
    mask = no_coop_mask(r1, r2, 0.5)
    expected = [policy_action(NeighborPair(0, 1, a, b), PolicyParams(0.5)) is Action.NO_COOP for a, b in zip(r1, r2)]
    assert mask.tolist() == expected


@pytest.mark.parametrize("rho, expected", [(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)])
def test_no_coop_probability(rho, expected):
    assert no_coop_probability(PolicyParams(rho)) == pytest.approx(expected)


def test_no_coop_frequency_matches_rho_squared():
    rng = np.random.default_rng(17)
    window = Window.centered(4.0)
    policy = PolicyParams(0.7)
    outcomes = []
    while len(outcomes) < 3000:
        pattern = sample_ppp(1.0, window, rng)
        if len(pattern) >= 2:
            outcomes.append(policy_action(two_nearest(pattern, (0.0, 0.0)), policy) is Action.NO_COOP)
    frequency = float(np.mean(outcomes))
    assert abs(frequency - 0.49) <= 4.0 * math.sqrt(0.49 * 0.51 / len(outcomes))
