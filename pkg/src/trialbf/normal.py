"""Normal density, CDF and quantile helpers (scalar, log-space where it matters)."""

import math

from scipy import special

from trialbf.errors import DomainError

_LOG_2PI = math.log(2.0 * math.pi)
_SQRT_HALF = math.sqrt(0.5)


def normal_log_pdf(x: float, mean: float, variance: float) -> float:
    """Log density of N(mean, variance) at ``x``."""
    if not variance > 0:
        raise DomainError(f"variance must be positive, got {variance}")
    d = x - mean
    return -0.5 * (_LOG_2PI + math.log(variance) + d * d / variance)


def std_normal_cdf(z: float) -> float:
    return float(special.ndtr(z))


def std_normal_logcdf(z: float) -> float:
    """log Phi(z), accurate far into the lower tail where Phi(z) underflows."""
    return float(special.log_ndtr(z))


def log_ndtr_ratio(a: float, b: float, diff: float) -> float:
    """log Phi(a) - log Phi(b), with ``diff`` = a - b supplied by the caller.

    Deep in the lower tail log Phi(x) = log(erfcx(-x/sqrt 2) / 2) - x^2/2, so
    the quadratic parts combine to diff * (a + b) / 2 instead of cancelling.
    """
    if a < -1.0 and b < -1.0:
        scaled = math.log(special.erfcx(-a * _SQRT_HALF)) - math.log(special.erfcx(-b * _SQRT_HALF))
        return scaled - 0.5 * diff * (a + b)
    return std_normal_logcdf(a) - std_normal_logcdf(b)


def std_normal_quantile(p: float) -> float:
    if not 0 < p < 1:
        raise DomainError(f"quantile needs p strictly inside (0, 1), got {p}")
    return float(special.ndtri(p))
