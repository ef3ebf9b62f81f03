import math

import pytest

from coopnet.analytic import CoverageMethod, reference_nocoop_coverage
from coopnet.analytic.reference import interference_exponent
from coopnet.settings import DEFAULT_PARAMS, SystemParams


@pytest.mark.parametrize("threshold", [0.1, 1.0, 10.0])
def test_interference_exponent_closed_form_for_beta_four(threshold):
    root = math.sqrt(threshold)
    value, _ = interference_exponent(threshold, 4.0)
    assert value == pytest.approx(0.5 * root * (math.pi / 2.0 - math.atan(1.0 / root)), rel=1e-9)


@pytest.mark.parametrize("threshold", [0.1, 1.0, 10.0])
def test_noise_free_coverage_has_closed_form(threshold):
    params = SystemParams(noise=0.0, threshold=threshold)
    root = math.sqrt(threshold)
    expected = 1.0 / (1.0 + root * (math.pi / 2.0 - math.atan(1.0 / root)))
    assert reference_nocoop_coverage(params).coverage == pytest.approx(expected, rel=1e-8)


def test_reference_result_fields():
    result = reference_nocoop_coverage(DEFAULT_PARAMS)
    assert result.method is CoverageMethod.REFERENCE
    assert 0.0 < result.coverage < 1.0
    assert result.error_estimate < 1e-6


def test_tiny_threshold_is_almost_certain():
    assert reference_nocoop_coverage(DEFAULT_PARAMS.with_threshold(1e-9)).coverage == pytest.approx(1.0, abs=1e-6)
