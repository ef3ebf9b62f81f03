import math

import numpy as np
import pytest

from coopnet.interference import default_outer_radius, interference_laplace, interference_mean, sample_interference
from coopnet.settings import DEFAULT_PARAMS, SystemParams


def test_default_outer_radius_scales_with_intensity():
    assert default_outer_radius(DEFAULT_PARAMS) == pytest.approx(10.0)
    assert default_outer_radius(SystemParams(intensity=4.0)) == pytest.approx(5.0)


def test_scalar_radius_returns_a_float():
    value = sample_interference(1.0, 0.5, DEFAULT_PARAMS, 0)
    assert isinstance(value, float)
    assert value > 0


def test_empty_draw():
    assert sample_interference(1.0, 0.5, DEFAULT_PARAMS, 0, size=0).shape == (0,)


def test_sparse_network_leaves_only_the_boundary_atom():
    params = SystemParams(intensity=1e-9)
    draws = sample_interference(1.0, 1.0, params, 4, size=20_000, outer_radius=5.0, compensate_tail=False)
    assert abs(draws.mean() - 1.0) <= 4.0 / math.sqrt(len(draws))


@pytest.mark.parametrize("rho", [0.0, 0.5, 1.0])
def test_sampled_mean_does_not_depend_on_rho(rho):
    draws = sample_interference(1.0, rho, DEFAULT_PARAMS, 21, size=30_000)
    stderr = draws.std(ddof=1) / math.sqrt(len(draws))
    assert abs(draws.mean() - interference_mean(1.0, DEFAULT_PARAMS)) <= 4.0 * stderr


def test_sampled_transform_matches_laplace():
    s, rho, r2 = 1.0, 0.5, 0.5
    draws = sample_interference(r2, rho, DEFAULT_PARAMS, 8, size=30_000)
    values = np.exp(-s * draws)
    stderr = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(values.mean() - interference_laplace(s, rho, r2, DEFAULT_PARAMS).real) <= 4.0 * stderr


def test_dropping_the_boundary_atom_only_lowers_coupled_draws():
    r2 = np.full(2000, 0.7)
    full = sample_interference(r2, 0.3, DEFAULT_PARAMS, 5, size=2000)
    cancelled = sample_interference(r2, 0.3, DEFAULT_PARAMS, 5, size=2000, include_boundary=False)
    assert np.all(cancelled <= full)
    assert np.any(cancelled < full)


def test_invalid_arguments_raise():
    with pytest.raises(ValueError):
        sample_interference(1.0, 1.2, DEFAULT_PARAMS, 0)
    with pytest.raises(ValueError):
        sample_interference(0.0, 0.5, DEFAULT_PARAMS, 0)
    with pytest.raises(ValueError):
        sample_interference(1.0, 0.5, DEFAULT_PARAMS, 0, outer_radius=-1.0)
