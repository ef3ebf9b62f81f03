import math

import numpy as np
import pytest

from coopnet.channel import (
    ZLaplaceParams,
    coherent_sum,
    laplace_order_holds,
    sample_z,
    z_laplace,
    z_mean,
)
from coopnet.errors import CoverageError, TransformDomainError


def test_z_laplace_is_one_at_zero():
    assert z_laplace(0.0, ZLaplaceParams(1.0, 2.0)) == pytest.approx(1.0, abs=1e-15)


def test_z_laplace_is_bounded_on_the_right_half_plane():
    s = np.array([0.5, 3.0, 1j, -2j, 1.0 + 5j, 20.0 - 0.5j])
    assert np.all(np.abs(z_laplace(s, ZLaplaceParams(0.7, 1.9))) <= 1.0 + 1e-12)


def test_z_laplace_matches_sampled_transform():
    z = sample_z(1.0, 1.0, 1.0, 3, size=200_000)
    values = np.exp(-z)
    stderr = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(values.mean() - z_laplace(1.0, ZLaplaceParams(1.0, 1.0)).real) <= 4.0 * stderr


def test_z_laplace_slope_at_zero_is_mean():
    mu = ZLaplaceParams(0.4, 2.5)
    h = 1e-6
    slope = -(z_laplace(h, mu) - z_laplace(-h, mu)).real / (2.0 * h)
    assert slope == pytest.approx(z_mean(mu), rel=1e-4)


def test_z_mean_equal_rates():
    assert z_mean(ZLaplaceParams(1.0, 1.0)) == pytest.approx(math.pi / 2.0 + 2.0)


def test_z_mean_is_homogeneous():
    assert z_mean(ZLaplaceParams(2.0, 6.0)) == pytest.approx(z_mean(ZLaplaceParams(1.0, 3.0)) / 2.0)


def test_sampled_mean_matches_z_mean():
    r2 = 2.0**0.25
    z = sample_z(1.0, r2, 1.0, 10, size=200_000)
    expected = z_mean(ZLaplaceParams.from_distances(1.0, r2, 1.0, 4.0))
    assert abs(z.mean() - expected) <= 4.0 * z.std(ddof=1) / math.sqrt(len(z))


def test_coherent_sum_dominates_each_link():
    rng = np.random.default_rng(2)
    g1, g2 = rng.exponential(1.0, size=(2, 1000))
    z = coherent_sum(g1, g2, 0.5, 0.8, 4.0)
    assert np.all(z >= g1 * 0.5**-4.0)
    assert np.all(z >= g2 * 0.8**-4.0)
    assert coherent_sum(0.0, 0.0, 0.5, 0.8, 4.0) == 0.0


def test_sample_z_rejects_non_positive_inputs():
    with pytest.raises(ValueError):
        sample_z(0.0, 1.0, 1.0, 0)


def test_z_laplace_rejects_branch_cut_and_non_finite():
    mu = ZLaplaceParams(1.0, 1.0)
    with pytest.raises(TransformDomainError) as excinfo:
        z_laplace(-10.0, mu)
    assert isinstance(excinfo.value, CoverageError)
    with pytest.raises(ValueError):
        z_laplace(complex(math.nan, 0.0), mu)


def test_z_laplace_params_reject_non_positive_rates():
    with pytest.raises(ValueError):
        ZLaplaceParams(0.0, 1.0)


@pytest.mark.parametrize("mu", [0.1, 1.0, 10.0])
def test_single_link_is_laplace_dominated_by_half_coherent_sum(mu):
    assert laplace_order_holds(mu, np.logspace(-3, 3, 30))
