"""
Quadrature cross-check for the closed-form Bayes factors.

Integrates likelihood x prior directly, renormalising a truncated prior by a
second integral, instead of using any of the closed forms in
:mod:`trialbf.bayes`. Integrands are shifted by their maximum so the check
also works when the Bayes factor itself under- or overflows.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate, optimize

from trialbf.bayes import PriorSpec, Truncation
from trialbf.effects import LogEffect
from trialbf.errors import DomainError, OracleFailureError

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
# a concave quadratic with curvature >= 1/width^2 has dropped by >= 98
# log units this many widths away from its constrained maximum
_WINDOW_WIDTHS = 14.0
_BREAKS = [2.0**k for k in range(-24, 4)]


def _support(truncation: Truncation) -> tuple[float, float]:
    if truncation is Truncation.POSITIVE_ONLY:
        return 0.0, math.inf
    if truncation is Truncation.NEGATIVE_ONLY:
        return -math.inf, 0.0
    return -math.inf, math.inf


def _argmax_concave(logf, search_lo, search_hi, sup_lo, sup_hi) -> float:
    lo, hi = max(search_lo, sup_lo), min(search_hi, sup_hi)
    if lo > hi:
        # search window misses the support; the maximum sits on its near edge
        return sup_lo if search_hi < sup_lo else sup_hi
    res = optimize.minimize_scalar(
        lambda t: -logf(t), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-14 * max(1.0, hi - lo)},
    )
    best = float(res.x)
    for edge in (lo, hi):
        if logf(edge) >= logf(best):
            best = edge
    return best


def _log_integral(logf, peak: float, width: float, sup_lo: float, sup_hi: float) -> float:
    """log of the integral of exp(logf) over the support, logf concave."""
    a = max(sup_lo, peak - _WINDOW_WIDTHS * width)
    b = min(sup_hi, peak + _WINDOW_WIDTHS * width)
    shift = logf(peak)
    points = sorted(
        {peak}
        | {peak - width * k for k in _BREAKS if peak - width * k > a}
        | {peak + width * k for k in _BREAKS if peak + width * k < b}
    )
    points = [p for p in points if a < p < b]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr = integrate.quad(
            lambda t: math.exp(logf(t) - shift), a, b,
            points=points or None, epsabs=0.0, epsrel=1e-12, limit=1000,
        )
    if not value > 0 or not np.isfinite(value) or abserr > 1e-9 * value:
        raise OracleFailureError(
            f"quadrature did not converge on [{a}, {b}]: value={value}, abserr={abserr}"
        )
    return shift + math.log(value)


def log_bf_quadrature_oracle(effect: LogEffect, prior: PriorSpec) -> float:
    """Log Bayes factor against the null by numerical integration."""
    if not prior.tau > 0:
        raise DomainError("the quadrature oracle needs tau > 0")
    th, sigma = effect.theta_hat, effect.sigma
    mu, tau = prior.mu, prior.tau
    sup_lo, sup_hi = _support(prior.truncation)

    def log_prior(t):
        d = (t - mu) / tau
        return -0.5 * d * d - math.log(tau) - _HALF_LOG_2PI

    def log_lik(t):
        d = (th - t) / sigma
        return -0.5 * d * d - math.log(sigma) - _HALF_LOG_2PI

    def log_joint(t):
        return log_lik(t) + log_prior(t)

    # the joint's mode lies between theta_hat and mu, inside this hull
    hull_lo = min(mu - 12 * tau, th - 12 * sigma)
    hull_hi = max(mu + 12 * tau, th + 12 * sigma)
    peak = _argmax_concave(log_joint, hull_lo, hull_hi, sup_lo, sup_hi)
    log_marginal = _log_integral(log_joint, peak, min(sigma, tau), sup_lo, sup_hi)

    log_norm = 0.0
    if prior.truncation is not Truncation.NONE:
        prior_peak = min(max(mu, sup_lo), sup_hi)
        log_norm = _log_integral(log_prior, prior_peak, tau, sup_lo, sup_hi)

    log_null = log_lik(0.0)
    return log_marginal - log_norm - log_null


def bf_quadrature_oracle(effect: LogEffect, prior: PriorSpec) -> float:
    """Bayes factor against the null by numerical integration (may overflow to inf)."""
    log_bf = log_bf_quadrature_oracle(effect, prior)
    try:
        return math.exp(log_bf)
    except OverflowError:
        return math.inf
