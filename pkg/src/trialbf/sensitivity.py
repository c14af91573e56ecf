"""
Bayes factor sensitivity grids over the prior mean and standard deviation.

Rows of the grid are prior standard deviations (tau), columns prior means
(mu), both on the log-effect scale. A row with ``tau == 0`` holds point-mass
priors; under a truncated alternative the point masses outside the support
are left absent (NaN) instead of raising.
"""

from __future__ import annotations

import io
import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from trialbf.bayes import PriorSpec, Truncation, bayes_factor, benefit_truncation
from trialbf.effects import BenefitSign, LogEffect
from trialbf.errors import ConfigurationError, UnsupportedPointPriorError
from trialbf.export import SCHEMA_VERSION, effect_provenance, fmt

DEFAULT_CLIP_FLOOR = 0.01
DEFAULT_N = 201


@dataclass(frozen=True)
class GridSpec:
    mu_min: float
    mu_max: float
    tau_min: float = 0.0
    tau_max: float = 1.0
    n_mu: int = DEFAULT_N
    n_tau: int = DEFAULT_N
    truncation: Truncation = Truncation.NONE
    clip_floor: float = DEFAULT_CLIP_FLOOR

    def __post_init__(self):
        object.__setattr__(self, "truncation", Truncation(self.truncation))
        if not self.mu_min < self.mu_max:
            raise ConfigurationError(f"need mu_min < mu_max, got {self.mu_min}, {self.mu_max}")
        if not 0 <= self.tau_min <= self.tau_max:
            raise ConfigurationError(f"need 0 <= tau_min <= tau_max, got {self.tau_min}, {self.tau_max}")
        if int(self.n_mu) != self.n_mu or int(self.n_tau) != self.n_tau or self.n_mu < 2 or self.n_tau < 2:
            raise ConfigurationError(f"grid sizes must be integers >= 2, got {self.n_mu} x {self.n_tau}")
        if not self.clip_floor > 0:
            raise ConfigurationError(f"clip floor must be positive, got {self.clip_floor}")

    @classmethod
    def for_effect(cls, effect: LogEffect, **overrides) -> "GridSpec":
        """Default grid: benefit-side means (HR 0.5..1 or OR 1..3), tau in [0, 1]."""
        if effect.benefit_sign is BenefitSign.NEGATIVE:
            kw = dict(mu_min=math.log(0.5), mu_max=0.0)
        else:
            kw = dict(mu_min=0.0, mu_max=math.log(3.0))
        kw["truncation"] = benefit_truncation(effect)
        kw.update(overrides)
        return cls(**kw)

    def mu_axis(self) -> np.ndarray:
        return np.linspace(self.mu_min, self.mu_max, int(self.n_mu))

    def tau_axis(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau_max, int(self.n_tau))


@dataclass(frozen=True)
class MaxCell:
    mu: float
    tau: float
    log_bf: float

    @property
    def bf(self) -> float:
        return math.exp(self.log_bf) if self.log_bf < 709 else math.inf


@dataclass(frozen=True)
class SensitivityGrid:
    spec: GridSpec
    mu_axis: np.ndarray
    tau_axis: np.ndarray
    log_bf: np.ndarray  # shape (n_tau, n_mu), NaN where the prior is undefined
    max_cell: MaxCell
    effect: LogEffect = field(repr=False)


def cell_log_bf(effect: LogEffect, mu: float, tau: float, truncation: Truncation) -> float:
    """Log BF for one cell, NaN when the point prior falls outside the support."""
    try:
        prior = PriorSpec(float(mu), float(tau), truncation)
    except UnsupportedPointPriorError:
        return math.nan
    return bayes_factor(effect, prior).log_bf


def _row(effect, tau, mu_axis, truncation):
    return [cell_log_bf(effect, mu, tau, truncation) for mu in mu_axis]


def _argmax(mu_axis, tau_axis, log_bf) -> MaxCell:
    present = ~np.isnan(log_bf)
    if not present.any():
        raise ConfigurationError("grid has no defined cells")
    best = np.max(log_bf[present])
    # rows are ascending in tau; within the best row pick the smallest |mu|
    rows, cols = np.nonzero(log_bf == best)
    i = rows.min()
    in_row = cols[rows == i]
    j = in_row[np.argmin(np.abs(mu_axis[in_row]))]
    return MaxCell(float(mu_axis[j]), float(tau_axis[i]), float(best))


def grid_eval(effect: LogEffect, spec: GridSpec, workers: int | None = None) -> SensitivityGrid:
    """Evaluate the log Bayes factor on every (tau, mu) cell.

    Rows are independent; ``workers > 1`` spreads them over a thread pool.
    The result does not depend on the schedule.
    """
    mu_axis, tau_axis = spec.mu_axis(), spec.tau_axis()
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda t: _row(effect, t, mu_axis, spec.truncation), tau_axis))
    else:
        rows = [_row(effect, t, mu_axis, spec.truncation) for t in tau_axis]
    log_bf = np.array(rows, dtype=float)
    log_bf.setflags(write=False)
    return SensitivityGrid(spec, mu_axis, tau_axis, log_bf, _argmax(mu_axis, tau_axis, log_bf), effect)


def grid_clip(grid: SensitivityGrid) -> np.ndarray:
    """Bayes factors for display: values below the clip floor are raised to it, NaN stays NaN."""
    with np.errstate(over="ignore"):
        bf = np.exp(grid.log_bf)
    return np.where(bf < grid.spec.clip_floor, grid.spec.clip_floor, bf)


def grid_max(grid: SensitivityGrid) -> tuple[float, float, float]:
    """(mu, tau, bf) of the largest cell; ties go to the smallest tau, then smallest |mu|."""
    cell = _argmax(grid.mu_axis, grid.tau_axis, grid.log_bf)
    return cell.mu, cell.tau, cell.bf


def grid_to_csv(grid: SensitivityGrid) -> str:
    clipped = grid_clip(grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["mu", "tau", "log_bf", "bf_clipped", "mu_ratio"])
    for i, tau in enumerate(grid.tau_axis):
        for j, mu in enumerate(grid.mu_axis):
            w.writerow([
                fmt(float(mu)), fmt(float(tau)), fmt(float(grid.log_bf[i, j])),
                fmt(float(clipped[i, j])), fmt(math.exp(mu)),
            ])
    return buf.getvalue()


def grid_to_dict(grid: SensitivityGrid) -> dict:
    s = grid.spec
    m = grid.max_cell
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "sensitivity_grid",
        "effect": effect_provenance(grid.effect),
        "spec": {
            "mu_min": s.mu_min, "mu_max": s.mu_max, "tau_min": s.tau_min, "tau_max": s.tau_max,
            "n_mu": int(s.n_mu), "n_tau": int(s.n_tau), "truncation": s.truncation.value,
            "clip_floor": s.clip_floor,
        },
        "mu_axis": grid.mu_axis,
        "mu_axis_ratio": np.exp(grid.mu_axis),
        "tau_axis": grid.tau_axis,
        "log_bf": grid.log_bf,
        "max_cell": {
            "mu": m.mu, "mu_ratio": math.exp(m.mu), "tau": m.tau, "log_bf": m.log_bf, "bf": m.bf,
        },
    }
