"""
Reverse-Bayes regions: which prior means give a Bayes factor of at least gamma.

For a fixed prior sd ``tau`` the log Bayes factor is unimodal in the prior
mean, so the set {mu : BF(mu, tau) >= gamma} is an interval. Untruncated
priors have a closed form; truncated ones are solved by bisection on each
side of the numerically located maximiser.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

from trialbf.bayes import PriorSpec, Truncation, bayes_factor, bf_point
from trialbf.effects import LogEffect
from trialbf.errors import ConfigurationError, DomainError
from trialbf.export import SCHEMA_VERSION, effect_provenance, fmt

Interval = tuple[float, float]

_BRACKET_SDS = 20.0


def bisect(f: Callable[[float], float], inside: float, outside: float, xtol: float = 1e-13) -> float:
    """Locate the sign change of ``f`` between ``inside`` (f >= 0) and ``outside`` (f < 0).

    Returns the last point known to satisfy f >= 0.
    """
    if f(inside) < 0 or f(outside) >= 0:
        raise DomainError("bisect needs f(inside) >= 0 > f(outside)")
    while abs(outside - inside) > xtol * max(1.0, abs(inside)):
        mid = 0.5 * (inside + outside)
        if mid == inside or mid == outside:
            break
        if f(mid) >= 0:
            inside = mid
        else:
            outside = mid
    return inside


def _support_closure(truncation: Truncation) -> tuple[float, float]:
    if truncation is Truncation.POSITIVE_ONLY:
        return 0.0, math.inf
    if truncation is Truncation.NEGATIVE_ONLY:
        return -math.inf, 0.0
    return -math.inf, math.inf


def _clip_open(lo: float, hi: float, truncation: Truncation) -> Optional[Interval]:
    """Intersect a point-prior interval with the open truncation support."""
    sup_lo, sup_hi = _support_closure(truncation)
    lo, hi = max(lo, sup_lo), min(hi, sup_hi)
    if lo >= hi:
        return None
    return lo, hi


def _side(f, argmax: float, step: float, edge: float) -> float:
    """Bound on one side of ``argmax``; ``step`` carries the direction."""
    target = argmax + step
    for _ in range(200):
        if (step < 0 and target <= edge) or (step > 0 and target >= edge):
            if f(edge) >= 0:
                return edge
            target = edge
            break
        if f(target) < 0:
            break
        step *= 2.0
        target = argmax + step
    else:
        return math.copysign(math.inf, step)
    return bisect(f, argmax, target)


def rb_mu_bounds(
    effect: LogEffect, tau: float, gamma: float = 1.0, truncation: Truncation | str = Truncation.NONE
) -> Optional[Interval]:
    """Interval of prior means whose Bayes factor reaches ``gamma`` at this ``tau``.

    Returns None when no prior mean gets there. Bounds on a truncated
    support are clipped to the support edge.
    """
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    if not tau >= 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    truncation = Truncation(truncation)
    log_gamma = math.log(gamma)
    th, sigma = effect.theta_hat, effect.sigma
    v = sigma * sigma + tau * tau

    if tau == 0 or truncation is Truncation.NONE:
        if tau == 0:
            log_max = bf_point(effect, th).log_bf
        else:
            log_max = bayes_factor(effect, PriorSpec(th, tau)).log_bf
        if log_max < log_gamma:
            return None
        half = math.sqrt(2.0 * v * (log_max - log_gamma))
        return _clip_open(th - half, th + half, truncation)

    sup_lo, sup_hi = _support_closure(truncation)

    def f(mu: float) -> float:
        return bayes_factor(effect, PriorSpec(mu, tau, truncation)).log_bf - log_gamma

    width = _BRACKET_SDS * math.sqrt(v)
    lo, hi = max(sup_lo, th - width), min(sup_hi, th + width)
    if lo > hi:
        argmax = sup_lo if th + width < sup_lo else sup_hi
    else:
        res = optimize.minimize_scalar(
            lambda m: -f(m), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-12 * max(1.0, hi - lo)},
        )
        argmax = float(res.x)
        for x in (lo, hi):
            if f(x) > f(argmax):
                argmax = x
    if f(argmax) < 0:
        return None
    return _side(f, argmax, -width, sup_lo), _side(f, argmax, width, sup_hi)


@dataclass(frozen=True)
class ReverseBayesRegion:
    threshold_gamma: float
    tau_axis: np.ndarray
    intervals: list[Optional[Interval]]
    truncation: Truncation
    effect: LogEffect = field(repr=False)

    @property
    def max_tau_present(self) -> Optional[float]:
        present = [t for t, iv in zip(self.tau_axis, self.intervals) if iv is not None]
        return float(max(present)) if present else None

    def widest(self) -> Optional[tuple[float, Interval]]:
        best = None
        for t, iv in zip(self.tau_axis, self.intervals):
            if iv is not None and (best is None or iv[1] - iv[0] > best[1][1] - best[1][0]):
                best = (float(t), iv)
        return best


def rb_region(
    effect: LogEffect,
    tau_axis: Sequence[float],
    gamma: float = 1.0,
    truncation: Truncation | str = Truncation.NONE,
) -> ReverseBayesRegion:
    tau_axis = np.asarray(tau_axis, dtype=float)
    if tau_axis.size == 0:
        raise ConfigurationError("tau axis is empty")
    if np.any(tau_axis < 0) or np.any(np.diff(tau_axis) < 0):
        raise ConfigurationError("tau axis must be non-negative and ascending")
    truncation = Truncation(truncation)
    intervals = [rb_mu_bounds(effect, float(t), gamma, truncation) for t in tau_axis]
    return ReverseBayesRegion(gamma, tau_axis, intervals, truncation, effect)


def verdict(region: ReverseBayesRegion) -> str:
    n = len(region.intervals)
    k = sum(iv is not None for iv in region.intervals)
    name = region.effect.summary.scale.value if region.effect.summary is not None else "ratio"
    head = f"BF10 >= {region.threshold_gamma:g}"
    if k == 0:
        return f"{head} is not reached by any prior mean for the {n} prior sds tried"
    tau, (lo, hi) = region.widest()
    return (
        f"{head} for {k}/{n} prior sds (up to tau={region.max_tau_present:.3g}); widest range "
        f"{name} {math.exp(lo):.3g} to {math.exp(hi):.3g} at tau={tau:.3g} (log width {hi - lo:.3g})"
    )


def region_to_csv(region: ReverseBayesRegion) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tau", "mu_low", "mu_high", "present", "ratio_low", "ratio_high"])
    for t, iv in zip(region.tau_axis, region.intervals):
        if iv is None:
            w.writerow([fmt(float(t)), "", "", "false", "", ""])
        else:
            lo, hi = iv
            w.writerow([
                fmt(float(t)), fmt(lo), fmt(hi), "true", fmt(math.exp(lo)), fmt(safe_exp(hi)),
            ])
    return buf.getvalue()


def safe_exp(x: float) -> float:
    return math.exp(x) if x < 709 else math.inf


def region_to_dict(region: ReverseBayesRegion) -> dict:
    rows = []
    for t, iv in zip(region.tau_axis, region.intervals):
        row = {"tau": float(t), "present": iv is not None}
        if iv is not None:
            row.update(mu_low=iv[0], mu_high=iv[1], ratio_low=safe_exp(iv[0]), ratio_high=safe_exp(iv[1]))
        rows.append(row)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "reverse_bayes_region",
        "gamma": region.threshold_gamma,
        "truncation": region.truncation.value,
        "effect": effect_provenance(region.effect),
        "max_tau_present": region.max_tau_present,
        "verdict": verdict(region),
        "intervals": rows,
    }
