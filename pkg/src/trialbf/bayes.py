"""
Closed-form Bayes factors for a normal likelihood of a log effect estimate.

The null fixes the log effect at 0. The alternative puts a normal prior
N(mu, tau^2) on it, optionally truncated to one sign, or a point mass at
``mu`` when ``tau == 0``. All results are kept as natural-log Bayes factors;
``bf`` is only a convenience view and may under/overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from trialbf.effects import BenefitSign, LogEffect
from trialbf.errors import DomainError, UnsupportedPointPriorError
from trialbf.normal import log_ndtr_ratio, normal_log_pdf


class Truncation(str, enum.Enum):
    NONE = "none"
    POSITIVE_ONLY = "positive_only"
    NEGATIVE_ONLY = "negative_only"

    @classmethod
    def parse(cls, value: str) -> "Truncation":
        key = value.strip().lower().replace("-", "_")
        aliases = {
            "above_one": cls.POSITIVE_ONLY,
            "positive": cls.POSITIVE_ONLY,
            "below_one": cls.NEGATIVE_ONLY,
            "negative": cls.NEGATIVE_ONLY,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown truncation {value!r}") from None

    def admits(self, mu: float) -> bool:
        """Whether a point mass at ``mu`` lies strictly inside the support."""
        if self is Truncation.POSITIVE_ONLY:
            return mu > 0
        if self is Truncation.NEGATIVE_ONLY:
            return mu < 0
        return True


def benefit_truncation(effect: LogEffect) -> Truncation:
    """Truncation that keeps only beneficial effects for this estimate."""
    if effect.benefit_sign is BenefitSign.NEGATIVE:
        return Truncation.NEGATIVE_ONLY
    return Truncation.POSITIVE_ONLY


class BFKind(str, enum.Enum):
    BF10 = "BF10"
    BF_PLUS_0 = "BF_plus_0"
    BF_MINUS_0 = "BF_minus_0"
    POINT = "point"


@dataclass(frozen=True)
class PriorSpec:
    """Prior for the log effect under the alternative."""

    mu: float
    tau: float = 0.0
    truncation: Truncation = Truncation.NONE

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"prior mean must be finite, got {self.mu}")
        if not (self.tau >= 0 and math.isfinite(self.tau)):
            raise DomainError(f"prior sd must be finite and >= 0, got {self.tau}")
        object.__setattr__(self, "truncation", Truncation(self.truncation))
        if self.tau == 0 and not self.truncation.admits(self.mu):
            raise UnsupportedPointPriorError(
                f"point prior at mu={self.mu} is outside the {self.truncation.value} support"
            )

    @property
    def is_point(self) -> bool:
        return self.tau == 0


@dataclass(frozen=True)
class BayesFactorResult:
    log_bf: float
    prior: PriorSpec
    effect: LogEffect
    kind: BFKind

    @property
    def bf(self) -> float:
        try:
            return math.exp(self.log_bf)
        except OverflowError:
            return math.inf


def bf_point(effect: LogEffect, mu: float) -> BayesFactorResult:
    """Point-mass alternative at ``mu`` against the null."""
    th, s2 = effect.theta_hat, effect.sigma**2
    # "+ 0.0" turns the -0.0 produced by mu == 0 with a negative estimate into 0.0
    log_bf = (2.0 * th * mu - mu * mu) / (2.0 * s2) + 0.0
    return BayesFactorResult(log_bf, PriorSpec(mu, 0.0), effect, BFKind.POINT)


def _log_bf_normal(theta_hat: float, sigma: float, mu: float, tau: float) -> float:
    s2 = sigma * sigma
    return normal_log_pdf(theta_hat, mu, s2 + tau * tau) - normal_log_pdf(theta_hat, 0.0, s2)


def bf_normal(effect: LogEffect, prior: PriorSpec) -> BayesFactorResult:
    """Untruncated normal prior; ``tau == 0`` reduces to :func:`bf_point`."""
    if prior.truncation is not Truncation.NONE:
        raise DomainError("bf_normal needs an untruncated prior; use bf_trunc")
    if prior.is_point:
        return bf_point(effect, prior.mu)
    log_bf = _log_bf_normal(effect.theta_hat, effect.sigma, prior.mu, prior.tau)
    return BayesFactorResult(log_bf, prior, effect, BFKind.BF10)


def bf_trunc(effect: LogEffect, prior: PriorSpec) -> BayesFactorResult:
    """Normal prior truncated to one sign of the log effect.

    The untruncated factor is multiplied by P(theta on the support | data)
    over P(theta on the support) under the prior, both evaluated as log-CDFs.
    """
    trunc = prior.truncation
    if trunc is Truncation.NONE:
        raise DomainError("bf_trunc needs a truncated prior; use bf_normal")
    if prior.is_point:
        if not trunc.admits(prior.mu):
            raise UnsupportedPointPriorError(
                f"point prior at mu={prior.mu} is outside the {trunc.value} support"
            )
        res = bf_point(effect, prior.mu)
        return BayesFactorResult(res.log_bf, prior, effect, BFKind.POINT)

    th, sigma = float(effect.theta_hat), float(effect.sigma)
    mu, tau = float(prior.mu), float(prior.tau)
    if abs(mu) / tau > 1e300:
        # indistinguishable from tau == 0: the point prior, or the support edge (the null)
        log_bf = bf_point(effect, mu).log_bf if trunc.admits(mu) else 0.0
        kind = BFKind.BF_MINUS_0 if trunc is Truncation.NEGATIVE_ONLY else BFKind.BF_PLUS_0
        return BayesFactorResult(log_bf, prior, effect, kind)
    # Phi arguments (th/s^2 + mu/t^2) / sqrt(1/s^2 + 1/t^2) and mu/tau, written in
    # r = tau/sigma so nothing squares tau; their difference is formed directly
    # because the two nearly cancel when tau -> 0 with mu off the support
    prior_arg = mu / tau
    r = tau / sigma
    h = math.hypot(1.0, r)
    diff = r * (th / sigma - (mu / sigma) / (1.0 + h)) / h
    post_arg = prior_arg + diff
    if trunc is Truncation.NEGATIVE_ONLY:
        post_arg, prior_arg, diff = -post_arg, -prior_arg, -diff
        kind = BFKind.BF_MINUS_0
    else:
        kind = BFKind.BF_PLUS_0
    correction = log_ndtr_ratio(post_arg, prior_arg, diff)
    log_bf = _log_bf_normal(th, sigma, mu, tau) + correction
    return BayesFactorResult(log_bf, prior, effect, kind)


def bayes_factor(effect: LogEffect, prior: PriorSpec) -> BayesFactorResult:
    """Dispatch to the point, normal or truncated formula."""
    if prior.truncation is Truncation.NONE:
        return bf_normal(effect, prior)
    return bf_trunc(effect, prior)


def bf_unit_information(
    effect: LogEffect, effective_n: float, truncation: Truncation | str = Truncation.NONE
) -> BayesFactorResult:
    """Unit-information prior: centred on 0 with tau^2 = effective_n * sigma^2.

    ``effective_n`` is the number of observations (participants, events, ...)
    behind the estimate, so that the prior carries the information of one.
    """
    if not (effective_n > 0 and math.isfinite(effective_n)):
        raise DomainError(f"effective_n must be positive and finite, got {effective_n}")
    tau = math.sqrt(effective_n) * effect.sigma
    return bayes_factor(effect, PriorSpec(0.0, tau, Truncation(truncation)))


def posterior_odds(bf: float, prior_odds: float) -> float:
    if not bf > 0 or not prior_odds > 0:
        raise DomainError(f"Bayes factor and prior odds must be positive, got {bf}, {prior_odds}")
    return bf * prior_odds
