import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from trialbf.errors import DomainError
from trialbf.normal import (
    log_ndtr_ratio,
    normal_log_pdf,
    std_normal_cdf,
    std_normal_logcdf,
    std_normal_quantile,
)


def test_normal_log_pdf_values():
    assert normal_log_pdf(0, 0, 1) == pytest.approx(-0.9189385332046727, abs=1e-15)
    assert normal_log_pdf(1, 0, 1) == pytest.approx(-1.4189385332046727, abs=1e-15)


def test_normal_log_pdf_matches_direct_density():
    # example-1 likelihood under the null, evaluated the long way
    x, v = -0.04082, 0.02036**2
    direct = math.log(math.exp(-x * x / (2 * v)) / math.sqrt(2 * math.pi * v))
    assert normal_log_pdf(x, 0, v) == pytest.approx(direct, rel=1e-13)


@pytest.mark.parametrize("v", [0.0, -1.0])
def test_normal_log_pdf_rejects_bad_variance(v):
    with pytest.raises(DomainError):
        normal_log_pdf(0, 0, v)


def test_cdf_and_quantile_values():
    assert std_normal_cdf(0) == 0.5
    assert std_normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-12)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_quantile_domain(p):
    with pytest.raises(DomainError):
        std_normal_quantile(p)


@given(st.floats(-30, 30))
def test_cdf_symmetry(z):
    assert std_normal_cdf(-z) == pytest.approx(1 - std_normal_cdf(z), abs=1e-15)


def test_quantile_round_trip():
    ps = np.concatenate([np.geomspace(1e-10, 0.5, 400), 1 - np.geomspace(1e-10, 0.5, 400)])
    for p in ps:
        assert abs(std_normal_cdf(std_normal_quantile(p)) - p) < 1e-12


def test_logcdf_deep_tail_does_not_underflow():
    # Mills-ratio asymptote: log Phi(z) ~ -z^2/2 - log(-z) - log(2 pi)/2
    z = -200.0
    approx = -z * z / 2 - math.log(-z) - 0.5 * math.log(2 * math.pi)
    assert std_normal_logcdf(z) == pytest.approx(approx, abs=1e-4)
    assert std_normal_logcdf(0.0) == pytest.approx(math.log(0.5), abs=1e-15)


@given(st.floats(-40, 5), st.floats(-1, 1))
def test_log_ndtr_ratio_matches_difference(b, diff):
    a = b + diff
    ref = std_normal_logcdf(a) - std_normal_logcdf(b)
    assert log_ndtr_ratio(a, b, diff) == pytest.approx(ref, abs=1e-9)


def test_log_ndtr_ratio_keeps_tiny_differences():
    # both arguments ~ -1e6: direct log-CDFs are ~ -5e11 and lose every digit of diff
    b, diff = -1e6, 1e-9
    expected = -diff * b  # derivative of log Phi at b is ~ -b deep in the tail
    assert log_ndtr_ratio(b + diff, b, diff) == pytest.approx(expected, rel=1e-5)
