"""
trialbf command line.

Usage:
    trialbf bf --estimate 0.96 --scale hr --p 0.045 --prior-mean-ratio 0.7 --prior-sd 0
    trialbf grid --estimate 1.63 --scale or --ci 0.93,2.85 --direction above-one --svg or.svg
    trialbf reverse --estimate 1.63 --scale or --ci 0.93,2.85 --direction above-one --gamma 1
    trialbf report --input trials.csv --effective-n 2000 --format json --out report.json

Global options (--se-from, --out, --format, --config) may be given before or
after the subcommand. A config file holds ``key = value`` lines using the long
option names; command-line flags override it.

Exit status: 0 success, 1 usage or configuration error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from pathlib import Path

import numpy as np

from trialbf.bayes import PriorSpec, Truncation, bayes_factor, benefit_truncation, bf_unit_information, posterior_odds
from trialbf.effects import (
    ConfidenceInterval,
    DEFAULT_CI_LEVEL,
    Direction,
    EffectSummary,
    LogEffect,
    Scale,
    SEPreference,
    log_transform,
    read_batch,
)
from trialbf.errors import ConfigurationError, TrialBFError
from trialbf.evidence import classify_log_bf
from trialbf.export import SCHEMA_VERSION, atomic_write_text, dumps, effect_provenance, fmt
from trialbf.report import UserPrior, build_report, human_bf, report_to_csv, report_to_table, result_entry
from trialbf.reverse import safe_exp, region_to_csv, region_to_dict, rb_region, verdict
from trialbf.sensitivity import GridSpec, grid_eval, grid_to_csv, grid_to_dict
from trialbf.svg import render_svg

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3
SUBCOMMANDS = ("bf", "grid", "reverse", "report")
_GLOBAL_WITH_VALUE = ("--se-from", "--out", "--format", "--config")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LOW,HIGH, got {text!r}")
    return float(parts[0]), float(parts[1])


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    d = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--se-from", choices=["ci", "p"], default=d,
                   help="preferred source of the standard error (default: ci, falling back to p)")
    g.add_argument("--out", default=d, help="output file (default: stdout)")
    g.add_argument("--format", choices=["table", "csv", "json", "svg"], default=d)
    g.add_argument("--config", default=d, help="key = value file merged under the flags")
    return p


def _effect_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("effect summary")
    g.add_argument("--input", help="batch file (CSV or JSON) instead of inline parameters")
    g.add_argument("--row", help="label of the batch row to use (default: the only row)")
    g.add_argument("--label", default="")
    g.add_argument("--estimate", type=float, help="ratio estimate (HR, OR or RR)")
    g.add_argument("--scale", default="hr", help="hr, or, rr (default: hr)")
    g.add_argument("--ci", type=_pair, help="confidence interval LOW,HIGH on the ratio scale")
    g.add_argument("--ci-level", type=float, default=DEFAULT_CI_LEVEL)
    g.add_argument("--p", type=float, help="two-sided p-value")
    g.add_argument("--direction", help="benefit side: below-one or above-one (default: inferred)")
    g.add_argument("--design-effect", type=float, help="ratio assumed in the power analysis")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trialbf", description="Bayes factors from published trial summaries.",
                     parents=[_global_options(suppress=True)])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    common = [_global_options(suppress=True), _effect_options()]

    p = sub.add_parser("bf", parents=common, help="Bayes factor for one prior")
    p.add_argument("--prior-mean-ratio", type=float, help="prior mean on the ratio scale (default 1)")
    p.add_argument("--prior-mean", type=float, help="prior mean on the log scale")
    p.add_argument("--prior-sd", type=float, default=0.0, help="prior sd of the log effect (0: point prior)")
    p.add_argument("--truncate", default="none", help="none, above-one, below-one or benefit")
    p.add_argument("--unit-info", type=float, metavar="N",
                   help="use a unit-information prior for effective sample size N instead")
    p.add_argument("--prior-odds", type=float, help="also report posterior odds")

    p = sub.add_parser("grid", parents=common, help="sensitivity grid over prior mean and sd")
    p.add_argument("--mu-range-ratio", type=_pair, help="prior-mean range LOW,HIGH on the ratio scale")
    p.add_argument("--mu-min", type=float, help="lowest prior mean (log scale)")
    p.add_argument("--mu-max", type=float, help="highest prior mean (log scale)")
    p.add_argument("--tau-min", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=1.0)
    p.add_argument("--n-mu", type=int, default=201)
    p.add_argument("--n-tau", type=int, default=201)
    p.add_argument("--truncate", default="benefit")
    p.add_argument("--clip-floor", type=float, default=0.01)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--svg", help="also write an SVG heatmap here")

    p = sub.add_parser("reverse", parents=common, help="prior means reaching BF10 >= gamma")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--tau-axis", type=_floats, help="comma-separated prior sds")
    p.add_argument("--tau-max", type=float, default=1.0)
    p.add_argument("--n-tau", type=int, default=11)
    p.add_argument("--truncate", default="benefit")

    p = sub.add_parser("report", parents=[_global_options(suppress=True)], help="batch evidence report")
    p.add_argument("--input", required=True, help="batch file (CSV or JSON)")
    p.add_argument("--effective-n", type=float, help="effective sample size for unit-information priors")
    p.add_argument("--prior", action="append", default=[], type=UserPrior.parse,
                   metavar="RATIO:SD[:TRUNC]", help="extra prior (repeatable)")
    p.add_argument("--gamma", type=float, default=1.0)
    return parser


def _split_argv(argv: list[str]) -> tuple[list[str], str | None, list[str]]:
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in SUBCOMMANDS:
            return argv[:i], a, argv[i + 1:]
        i += 2 if a in _GLOBAL_WITH_VALUE else 1
    return argv, None, []


def _config_args(path: str) -> list[str]:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    try:
        cp.read_string("[trialbf]\n" + text)
    except configparser.Error as exc:
        raise ConfigurationError(f"bad config file {path}: {exc}") from None
    args = []
    for key, value in cp.items("trialbf"):
        if key == "config":
            continue
        args += [f"--{key.replace('_', '-')}", value]
    return args


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    pre, cmd, post = _split_argv(argv)
    if cmd is None:
        if "-h" in argv or "--help" in argv:
            parser.print_help()
            raise SystemExit(EXIT_OK)
        raise UsageError("trialbf: error: expected a subcommand: " + ", ".join(SUBCOMMANDS))
    ns = parser.parse_args([cmd] + pre + post)
    config = getattr(ns, "config", None)
    if config:
        # config first so later (command-line) occurrences win
        ns = parser.parse_args([cmd] + _config_args(config) + pre + post)
    for name, default in (("se_from", "ci"), ("out", None), ("format", "table"), ("config", None)):
        if not hasattr(ns, name):
            setattr(ns, name, default)
    return ns


# -- inputs ------------------------------------------------------------------

class _DataError(TrialBFError):
    pass


def _infer_direction(args) -> Direction:
    if args.direction:
        return Direction.parse(args.direction)
    trunc = (getattr(args, "truncate", None) or "").strip().lower().replace("-", "_")
    if trunc in ("above_one", "positive_only", "positive"):
        return Direction.ABOVE_ONE
    if trunc in ("below_one", "negative_only", "negative"):
        return Direction.BELOW_ONE
    if args.design_effect is not None:
        return Direction.BELOW_ONE if args.design_effect < 1 else Direction.ABOVE_ONE
    return Direction.ABOVE_ONE if args.estimate > 1 else Direction.BELOW_ONE


def load_effect(args) -> LogEffect:
    pref = SEPreference.parse(args.se_from)
    if args.input:
        if args.estimate is not None:
            raise ConfigurationError("give either --input or inline parameters, not both")
        rows = read_batch(args.input)
        if args.row is not None:
            rows = [r for r in rows if r.label == args.row]
            if not rows:
                raise ConfigurationError(f"no row labelled {args.row!r} in {args.input}")
        if len(rows) != 1:
            raise ConfigurationError(f"{args.input} has {len(rows)} rows; pick one with --row")
        row = rows[0]
        if row.summary is None:
            raise _DataError(row.error)
        return log_transform(row.summary, row.se_preference or pref)
    if args.estimate is None:
        raise ConfigurationError("need --estimate (or --input)")
    ci = None
    if args.ci is not None:
        ci = ConfidenceInterval(args.ci[0], args.ci[1], args.ci_level)
    summary = EffectSummary(
        label=args.label,
        estimate=args.estimate,
        scale=Scale.parse(args.scale),
        ci=ci,
        p_two_sided=args.p,
        benefit_direction=_infer_direction(args),
        design_effect=args.design_effect,
    )
    return log_transform(summary, pref)


def _truncation(text: str, effect: LogEffect) -> Truncation:
    if text.strip().lower() == "benefit":
        return benefit_truncation(effect)
    return Truncation.parse(text)


def _scale_name(effect: LogEffect) -> str:
    return effect.summary.scale.value if effect.summary is not None else "ratio"


def _emit(args, text: str) -> None:
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------

def cmd_bf(args) -> int:
    effect = load_effect(args)
    if args.unit_info is not None:
        res = bf_unit_information(effect, args.unit_info, _truncation(args.truncate, effect))
    else:
        if args.prior_mean is not None and args.prior_mean_ratio is not None:
            raise ConfigurationError("give --prior-mean or --prior-mean-ratio, not both")
        if args.prior_mean is not None:
            mu = args.prior_mean
        else:
            mu = math.log(1.0 if args.prior_mean_ratio is None else args.prior_mean_ratio)
        res = bayes_factor(effect, PriorSpec(mu, args.prior_sd, _truncation(args.truncate, effect)))
    entry = result_entry("unit_information" if args.unit_info is not None else "user", res)
    post = None if args.prior_odds is None else posterior_odds(res.bf, args.prior_odds)

    fmt_ = args.format
    if fmt_ == "json":
        doc = {"schema_version": SCHEMA_VERSION, "kind": "bayes_factor",
               "effect": effect_provenance(effect), "result": entry}
        if post is not None:
            doc["prior_odds"], doc["posterior_odds"] = args.prior_odds, post
        _emit(args, dumps(doc))
    elif fmt_ == "csv":
        head = ["label", "theta_hat", "sigma", "se_source", "mu", "tau", "truncation", "kind",
                "log_bf", "bf", "category"]
        p = entry["prior"]
        vals = [effect.label, effect.theta_hat, effect.sigma, effect.se_source.value, p["mu"], p["tau"],
                p["truncation"], entry["kind"], entry["log_bf"], entry["bf"], entry["category"]]
        _emit(args, ",".join(head) + "\n" + ",".join(fmt(v) for v in vals) + "\n")
    elif fmt_ == "table":
        name = _scale_name(effect)
        p = entry["prior"]
        lines = [
            f"log estimate {effect.theta_hat:.4g}, SE {effect.sigma:.4g} ({effect.se_source.value})",
            f"prior: mean {name} {p['mu_ratio']:.3g} (log {p['mu']:.3g}), sd {p['tau']:.3g}, {p['truncation']}",
            f"BF10 = {human_bf(res.log_bf)}  (log BF10 = {res.log_bf:.4g}, {res.kind.value})",
            f"evidence: {entry['category']}",
        ]
        if post is not None:
            lines.append(f"posterior odds = {post:.3g}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        raise ConfigurationError("bf supports --format table, csv or json")
    return EXIT_OK


def cmd_grid(args) -> int:
    effect = load_effect(args)
    overrides = dict(
        tau_min=args.tau_min, tau_max=args.tau_max, n_mu=args.n_mu, n_tau=args.n_tau,
        truncation=_truncation(args.truncate, effect), clip_floor=args.clip_floor,
    )
    if args.mu_range_ratio is not None:
        lo, hi = args.mu_range_ratio
        if not (lo > 0 and hi > 0):
            raise ConfigurationError("--mu-range-ratio bounds must be positive")
        overrides.update(mu_min=math.log(lo), mu_max=math.log(hi))
    if args.mu_min is not None:
        overrides["mu_min"] = args.mu_min
    if args.mu_max is not None:
        overrides["mu_max"] = args.mu_max
    grid = grid_eval(effect, GridSpec.for_effect(effect, **overrides), workers=args.workers)
    design = effect.summary.design_effect if effect.summary is not None else None

    svg = None
    if args.svg or args.format == "svg":
        svg = render_svg(grid, design, _scale_name(effect))
    if args.svg:
        atomic_write_text(args.svg, svg)
    if args.format == "csv":
        _emit(args, grid_to_csv(grid))
    elif args.format == "json":
        _emit(args, dumps(grid_to_dict(grid)))
    elif args.format == "svg":
        _emit(args, svg)
    else:
        m = grid.max_cell
        _emit(args, (
            f"grid {grid.spec.n_tau} x {grid.spec.n_mu}, truncation {grid.spec.truncation.value}\n"
            f"max BF10 = {m.bf:.4g} at {_scale_name(effect)} {math.exp(m.mu):.3g} (log {m.mu:.4g}), "
            f"sd {m.tau:.3g} ({classify_log_bf(m.log_bf).category.value})\n"
            f"supremum over all priors = {effect.max_bf:.4g}\n"
        ))
    return EXIT_OK


def cmd_reverse(args) -> int:
    effect = load_effect(args)
    if args.tau_axis is not None:
        taus = np.asarray(args.tau_axis, dtype=float)
    else:
        if args.n_tau < 1:
            raise ConfigurationError("--n-tau must be >= 1")
        taus = np.linspace(0.0, args.tau_max, args.n_tau)
    region = rb_region(effect, taus, args.gamma, _truncation(args.truncate, effect))
    if args.format == "csv":
        _emit(args, region_to_csv(region))
    elif args.format == "json":
        _emit(args, dumps(region_to_dict(region)))
    elif args.format == "table":
        name = _scale_name(effect)
        lines = [f"{'tau':>8}  {name + ' low':>10}  {name + ' high':>10}"]
        for t, iv in zip(region.tau_axis, region.intervals):
            if iv is None:
                lines.append(f"{t:8.3g}  {'-':>10}  {'-':>10}")
            else:
                lines.append(f"{t:8.3g}  {math.exp(iv[0]):10.4g}  {safe_exp(iv[1]):10.4g}")
        lines.append(verdict(region))
        _emit(args, "\n".join(lines) + "\n")
    else:
        raise ConfigurationError("reverse supports --format table, csv or json")
    if args.out and args.format != "table":
        print(verdict(region))
    return EXIT_OK


def cmd_report(args) -> int:
    rows = read_batch(args.input)
    doc = build_report(rows, SEPreference.parse(args.se_from), args.effective_n, tuple(args.prior), args.gamma)
    if args.format == "json":
        _emit(args, dumps(doc))
    elif args.format == "csv":
        _emit(args, report_to_csv(doc))
    elif args.format == "table":
        _emit(args, report_to_table(doc))
    else:
        raise ConfigurationError("report supports --format table, csv or json")
    return EXIT_OK


COMMANDS = {"bf": cmd_bf, "grid": cmd_grid, "reverse": cmd_reverse, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"trialbf: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TrialBFError, ValueError) as exc:
        print(f"trialbf: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"trialbf: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
