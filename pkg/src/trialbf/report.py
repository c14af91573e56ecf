"""
Per-trial evidence reports for batch files.

Each trial gets its recovered (theta_hat, sigma), the best Bayes factor on
its default sensitivity grid, the Bayes factors of a fixed set of priors
(point mass at the design effect, unit-information if an effective sample
size is given, any user priors) and the point-prior reverse-Bayes interval.
Rows that fail to parse or compute are reported, never fatal.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from trialbf.bayes import (
    BayesFactorResult,
    PriorSpec,
    Truncation,
    bayes_factor,
    benefit_truncation,
    bf_point,
    bf_unit_information,
)
from trialbf.effects import BatchRow, LogEffect, SEPreference, log_transform, row_diagnostic, summary_to_record
from trialbf.errors import TrialBFError
from trialbf.evidence import classify_log_bf
from trialbf.export import SCHEMA_VERSION, fmt
from trialbf.reverse import rb_mu_bounds
from trialbf.sensitivity import GridSpec, grid_eval


@dataclass(frozen=True)
class UserPrior:
    """A prior given on the ratio scale; ``truncation`` may be 'benefit'."""

    mean_ratio: float
    sd: float
    truncation: str = "none"

    @classmethod
    def parse(cls, text: str) -> "UserPrior":
        parts = [p.strip() for p in text.split(":")]
        if len(parts) not in (2, 3):
            raise ValueError(f"prior {text!r}: expected MEAN_RATIO:SD[:TRUNCATION]")
        trunc = parts[2] if len(parts) == 3 else "none"
        return cls(float(parts[0]), float(parts[1]), trunc)

    def resolve(self, effect: LogEffect) -> PriorSpec:
        if self.truncation.strip().lower() == "benefit":
            trunc = benefit_truncation(effect)
        else:
            trunc = Truncation.parse(self.truncation)
        return PriorSpec(math.log(self.mean_ratio), self.sd, trunc)

    @property
    def name(self) -> str:
        return f"user:{self.mean_ratio:g}:{self.sd:g}:{self.truncation}"


def human_bf(log_bf: float) -> str:
    """Three significant digits; powers of ten once the value leaves double range."""
    if -700 < log_bf < 700:
        return f"{math.exp(log_bf):.3g}"
    return f"10^{log_bf / math.log(10):.4g}"


def result_entry(name: str, res: BayesFactorResult) -> dict:
    p = res.prior
    return {
        "name": name,
        "prior": {
            "mu": p.mu, "mu_ratio": math.exp(p.mu), "tau": p.tau, "truncation": p.truncation.value,
        },
        "kind": res.kind.value,
        "log_bf": res.log_bf,
        "bf": res.bf,
        "category": classify_log_bf(res.log_bf).category.value,
    }


def trial_report(
    row: BatchRow,
    se_preference: SEPreference = SEPreference.PREFER_CI,
    effective_n: float | None = None,
    user_priors: tuple[UserPrior, ...] = (),
    gamma: float = 1.0,
    grid_overrides: dict | None = None,
) -> dict:
    if row.summary is None:
        return {"label": row.label, "status": "error", "error": row.error}
    summary = row.summary
    try:
        effect = log_transform(summary, row.se_preference or se_preference)
        trunc = benefit_truncation(effect)

        grid = grid_eval(effect, GridSpec.for_effect(effect, **(grid_overrides or {})))
        m = grid.max_cell
        results = []
        if summary.design_effect is not None:
            res = bf_point(effect, math.log(summary.design_effect))
            results.append(result_entry("point_at_design_effect", res))
        if effective_n is not None:
            results.append(result_entry("unit_information", bf_unit_information(effect, effective_n)))
            results.append(
                result_entry("unit_information_directional", bf_unit_information(effect, effective_n, trunc))
            )
        for up in user_priors:
            results.append(result_entry(up.name, bayes_factor(effect, up.resolve(effect))))
        interval = rb_mu_bounds(effect, 0.0, gamma, trunc)
    except TrialBFError as exc:
        return {"label": row.label, "status": "error", "error": row_diagnostic(row.label, exc)}

    return {
        "label": row.label,
        "status": "ok",
        "input": summary_to_record(summary),
        "theta_hat": effect.theta_hat,
        "sigma": effect.sigma,
        "se_source": effect.se_source.value,
        "p_two_sided": summary.p_two_sided,
        "z": effect.z,
        "max_bf": {
            "grid": {
                "mu_min": grid.spec.mu_min, "mu_max": grid.spec.mu_max,
                "tau_min": grid.spec.tau_min, "tau_max": grid.spec.tau_max,
                "n_mu": int(grid.spec.n_mu), "n_tau": int(grid.spec.n_tau),
                "truncation": grid.spec.truncation.value,
            },
            "mu": m.mu,
            "mu_ratio": math.exp(m.mu),
            "tau": m.tau,
            "log_bf": m.log_bf,
            "bf": m.bf,
            "category": classify_log_bf(m.log_bf).category.value,
            "supremum_bf": effect.max_bf,
        },
        "results": results,
        "reverse_point_prior": {
            "gamma": gamma,
            "truncation": trunc.value,
            "present": interval is not None,
            "mu_low": None if interval is None else interval[0],
            "mu_high": None if interval is None else interval[1],
            "ratio_low": None if interval is None else math.exp(interval[0]),
            "ratio_high": None if interval is None else math.exp(interval[1]),
        },
    }


def build_report(
    rows: list[BatchRow],
    se_preference: SEPreference = SEPreference.PREFER_CI,
    effective_n: float | None = None,
    user_priors: tuple[UserPrior, ...] = (),
    gamma: float = 1.0,
    grid_overrides: dict | None = None,
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "evidence_report",
        "se_preference": se_preference.value,
        "effective_n": effective_n,
        "gamma": gamma,
        "trials": [
            trial_report(r, se_preference, effective_n, user_priors, gamma, grid_overrides) for r in rows
        ],
    }


def report_to_table(doc: dict) -> str:
    lines = []
    for t in doc["trials"]:
        if t["status"] != "ok":
            lines.append(f"ERROR {t['error']}")
            continue
        scale = t["input"]["scale"]
        m = t["max_bf"]
        lines.append(
            f"[{t['label']}] {scale} {t['input']['estimate']:.3g}: log estimate {t['theta_hat']:.3g}, "
            f"SE {t['sigma']:.3g} ({t['se_source']}), p = {fmt(t['p_two_sided']) or 'n/a'}"
        )
        lines.append(
            f"  max BF10 = {m['bf']:.4g} at {scale} {m['mu_ratio']:.3g}, sd {m['tau']:.3g} "
            f"({m['category']}); supremum {m['supremum_bf']:.4g}"
        )
        for r in t["results"]:
            p = r["prior"]
            lines.append(
                f"  {r['name']}: prior {scale} {p['mu_ratio']:.3g}, sd {p['tau']:.3g}, {p['truncation']} "
                f"-> BF10 = {human_bf(r['log_bf'])} ({r['category']})"
            )
        rb = t["reverse_point_prior"]
        if rb["present"]:
            lines.append(
                f"  point priors with BF10 >= {rb['gamma']:g}: {scale} {rb['ratio_low']:.4g} to {rb['ratio_high']:.4g}"
            )
        else:
            lines.append(f"  no point prior reaches BF10 >= {rb['gamma']:g}")
    return "\n".join(lines) + ("\n" if lines else "")


def report_to_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "status", "analysis", "mu", "mu_ratio", "tau", "truncation", "log_bf", "bf",
                "category", "theta_hat", "sigma", "se_source", "error"])
    for t in doc["trials"]:
        if t["status"] != "ok":
            w.writerow([t["label"], "error", "", "", "", "", "", "", "", "", "", "", "", t["error"]])
            continue
        base = [t["theta_hat"], t["sigma"], t["se_source"], ""]
        m = t["max_bf"]
        w.writerow([t["label"], "ok", "grid_max", fmt(m["mu"]), fmt(m["mu_ratio"]), fmt(m["tau"]),
                    m["grid"]["truncation"], fmt(m["log_bf"]), fmt(m["bf"]), m["category"]]
                   + [fmt(x) for x in base])
        for r in t["results"]:
            p = r["prior"]
            w.writerow([t["label"], "ok", r["name"], fmt(p["mu"]), fmt(p["mu_ratio"]), fmt(p["tau"]),
                        p["truncation"], fmt(r["log_bf"]), fmt(r["bf"]), r["category"]]
                       + [fmt(x) for x in base])
    return buf.getvalue()
