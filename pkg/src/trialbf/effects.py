"""
Published effect summaries and their log-scale form.

A trial usually reports a ratio estimate (HR, OR, RR) together with a
confidence interval and/or a two-sided p-value. Everything downstream works
with the natural log of the ratio and its standard error, recovered by
inverting the Wald interval or the Wald test.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from trialbf.errors import (
    CannotRecoverError,
    ConfigurationError,
    DomainError,
    UnusableSummaryError,
)
from trialbf.normal import std_normal_quantile

DEFAULT_CI_LEVEL = 0.95


class Scale(str, enum.Enum):
    HR = "HR"
    OR = "OR"
    RR = "RR"

    @classmethod
    def parse(cls, value: str) -> "Scale":
        try:
            return cls(value.strip().upper())
        except ValueError:
            raise DomainError(f"unknown ratio scale {value!r}; expected HR, OR or RR") from None


class Direction(str, enum.Enum):
    """Side of 1 on which the ratio indicates benefit."""

    BELOW_ONE = "below_one"
    ABOVE_ONE = "above_one"

    @classmethod
    def parse(cls, value: str) -> "Direction":
        key = value.strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise DomainError(
                f"unknown benefit direction {value!r}; expected below_one or above_one"
            ) from None


class SEPreference(str, enum.Enum):
    PREFER_CI = "prefer_ci"
    PREFER_P = "prefer_p"

    @classmethod
    def parse(cls, value: str) -> "SEPreference":
        key = value.strip().lower()
        aliases = {"ci": cls.PREFER_CI, "p": cls.PREFER_P}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown SE preference {value!r}; expected ci or p") from None


class SESource(str, enum.Enum):
    FROM_CI = "from_ci"
    FROM_P = "from_p"
    GIVEN = "given"


class BenefitSign(str, enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float = DEFAULT_CI_LEVEL

    def __post_init__(self):
        if not (self.lower > 0 and self.upper > 0):
            raise DomainError(f"CI bounds must be positive, got [{self.lower}, {self.upper}]")
        if not self.lower < self.upper:
            raise DomainError(
                f"degenerate CI: lower ({self.lower}) must be strictly below upper ({self.upper})"
            )
        if not 0 < self.level < 1:
            raise DomainError(f"CI level must lie in (0, 1), got {self.level}")


@dataclass(frozen=True)
class EffectSummary:
    """A trial result as published, on the ratio scale."""

    label: str
    estimate: float
    scale: Scale = Scale.HR
    ci: ConfidenceInterval | None = None
    p_two_sided: float | None = None
    benefit_direction: Direction = Direction.BELOW_ONE
    design_effect: float | None = None

    def __post_init__(self):
        who = self.label or "summary"
        if not isinstance(self.scale, Scale):
            object.__setattr__(self, "scale", Scale.parse(str(self.scale)))
        if not isinstance(self.benefit_direction, Direction):
            object.__setattr__(self, "benefit_direction", Direction.parse(str(self.benefit_direction)))
        if not (self.estimate > 0 and math.isfinite(self.estimate)):
            raise DomainError(f"{who}: ratio estimate must be positive and finite, got {self.estimate}")
        if self.ci is None and self.p_two_sided is None:
            raise UnusableSummaryError(f"{who}: need a confidence interval or a p-value")
        if self.ci is not None and not self.ci.lower <= self.estimate <= self.ci.upper:
            raise DomainError(
                f"{who}: estimate {self.estimate} outside CI [{self.ci.lower}, {self.ci.upper}]"
            )
        if self.p_two_sided is not None and not 0 < self.p_two_sided < 1:
            raise DomainError(f"{who}: p-value must lie in (0, 1), got {self.p_two_sided}")
        if self.design_effect is not None:
            d = self.design_effect
            ok = d < 1 if self.benefit_direction is Direction.BELOW_ONE else d > 1
            if not (d > 0 and ok):
                raise DomainError(
                    f"{who}: design effect {d} is not on the benefit side "
                    f"({self.benefit_direction.value}) of 1"
                )


@dataclass(frozen=True)
class LogEffect:
    """Log-scale estimate with its standard error."""

    theta_hat: float
    sigma: float
    se_source: SESource = SESource.GIVEN
    benefit_sign: BenefitSign = BenefitSign.NEGATIVE
    label: str = ""
    summary: EffectSummary | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"standard error must be positive and finite, got {self.sigma}")
        if not math.isfinite(self.theta_hat):
            raise DomainError(f"log estimate must be finite, got {self.theta_hat}")

    @property
    def z(self) -> float:
        return self.theta_hat / self.sigma

    @property
    def max_bf(self) -> float:
        """Largest Bayes factor any prior can reach, exp(z**2 / 2)."""
        return math.exp(0.5 * self.z**2)


def se_from_ci(lower: float, upper: float, level: float = DEFAULT_CI_LEVEL) -> float:
    """Standard error of a log ratio from its Wald confidence interval."""
    if not (lower > 0 and upper > 0):
        raise DomainError(f"CI bounds must be positive, got [{lower}, {upper}]")
    if not lower < upper:
        raise DomainError(f"degenerate CI: lower ({lower}) must be strictly below upper ({upper})")
    if not 0 < level < 1:
        raise DomainError(f"CI level must lie in (0, 1), got {level}")
    return (math.log(upper) - math.log(lower)) / (2.0 * std_normal_quantile(0.5 * (1.0 + level)))


def se_from_p(theta_hat: float, p_two_sided: float) -> float:
    """Standard error implied by a two-sided Wald p-value for ``theta_hat``."""
    if not 0 < p_two_sided < 1:
        raise DomainError(f"p-value must lie in (0, 1), got {p_two_sided}")
    if theta_hat == 0:
        raise CannotRecoverError("cannot recover a standard error from a p-value when the estimate is null")
    return abs(theta_hat) / std_normal_quantile(1.0 - 0.5 * p_two_sided)


def log_transform(
    summary: EffectSummary, se_preference: SEPreference | str = SEPreference.PREFER_CI
) -> LogEffect:
    """Convert a published summary to log scale, recovering the standard error.

    The preferred source (CI or p-value) is used when present, otherwise the
    other one. The choice is recorded in ``se_source``.
    """
    se_preference = SEPreference(se_preference)
    if summary.ci is None and summary.p_two_sided is None:
        raise UnusableSummaryError(f"{summary.label}: need a confidence interval or a p-value")
    if summary.estimate <= 0:
        raise DomainError(f"{summary.label}: ratio estimate must be positive")
    theta_hat = math.log(summary.estimate)

    use_ci = summary.ci is not None and (
        se_preference is SEPreference.PREFER_CI or summary.p_two_sided is None
    )
    if use_ci:
        ci = summary.ci
        sigma = se_from_ci(ci.lower, ci.upper, ci.level)
        source = SESource.FROM_CI
    else:
        sigma = se_from_p(theta_hat, summary.p_two_sided)
        source = SESource.FROM_P

    sign = BenefitSign.NEGATIVE if summary.benefit_direction is Direction.BELOW_ONE else BenefitSign.POSITIVE
    return LogEffect(theta_hat, sigma, source, sign, summary.label, summary)


# -- batch files -----------------------------------------------------------

BATCH_COLUMNS = (
    "label", "estimate", "scale", "ci_lower", "ci_upper", "ci_level", "p", "direction", "design_effect",
)
# per-row override of the SE source; not part of the core schema
OPTIONAL_COLUMNS = ("se_from",)


@dataclass
class BatchRow:
    """One parsed batch record; exactly one of ``summary`` and ``error`` is set."""

    index: int
    label: str
    summary: EffectSummary | None = None
    error: str | None = None
    se_preference: SEPreference | None = None


def _blank(value: Any) -> bool:
    return value is None or (isinstance(value, str) and value.strip() == "")


def _number(record: dict, key: str) -> float | None:
    value = record.get(key)
    if _blank(value):
        return None
    try:
        return float(value)
    except (TypeError, ValueError):
        raise DomainError(f"column {key!r}: not a number: {value!r}") from None


def summary_from_record(record: dict) -> EffectSummary:
    """Build an EffectSummary from a flat batch record (CSV row or JSON object)."""
    label = "" if _blank(record.get("label")) else str(record["label"]).strip()
    estimate = _number(record, "estimate")
    if estimate is None:
        raise DomainError("column 'estimate' is required")
    lower, upper = _number(record, "ci_lower"), _number(record, "ci_upper")
    if (lower is None) != (upper is None):
        raise DomainError("ci_lower and ci_upper must be given together")
    ci = None
    if lower is not None:
        level = _number(record, "ci_level")
        ci = ConfidenceInterval(lower, upper, DEFAULT_CI_LEVEL if level is None else level)
    scale = Scale.HR if _blank(record.get("scale")) else Scale.parse(str(record["scale"]))
    if _blank(record.get("direction")):
        direction = Direction.BELOW_ONE
    else:
        direction = Direction.parse(str(record["direction"]))
    return EffectSummary(
        label=label,
        estimate=estimate,
        scale=scale,
        ci=ci,
        p_two_sided=_number(record, "p"),
        benefit_direction=direction,
        design_effect=_number(record, "design_effect"),
    )


def row_diagnostic(label: str, exc: Exception) -> str:
    """Error text for a batch row, naming the row exactly once."""
    msg = str(exc)
    return msg if msg.startswith(f"{label}:") else f"{label}: {msg}"


def _rows_from_records(records: Iterable[dict]) -> list[BatchRow]:
    rows = []
    for i, record in enumerate(records):
        label = "" if _blank(record.get("label")) else str(record["label"]).strip()
        label = label or f"row {i + 1}"
        try:
            pref = None if _blank(record.get("se_from")) else SEPreference.parse(str(record["se_from"]))
            rows.append(BatchRow(i, label, summary_from_record({**record, "label": label}), se_preference=pref))
        except (DomainError, UnusableSummaryError) as exc:
            rows.append(BatchRow(i, label, error=row_diagnostic(label, exc)))
    return rows


def _check_header(columns: Iterable[str]) -> None:
    columns = [c.strip() for c in columns]
    missing = [c for c in BATCH_COLUMNS if c not in columns]
    unknown = [c for c in columns if c not in BATCH_COLUMNS + OPTIONAL_COLUMNS]
    if missing or unknown:
        parts = []
        if missing:
            parts.append("missing columns " + ", ".join(missing))
        if unknown:
            parts.append("unknown columns " + ", ".join(unknown))
        raise ConfigurationError("malformed batch header: " + "; ".join(parts))


def read_batch_csv(path: str | Path) -> list[BatchRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ConfigurationError(f"{path}: empty file, expected a header row")
        _check_header(reader.fieldnames)
        records = [{k.strip(): v for k, v in row.items()} for row in reader]
    return _rows_from_records(records)


def read_batch_json(path: str | Path) -> list[BatchRow]:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON: {exc}") from None
    records = doc.get("trials") if isinstance(doc, dict) else doc
    if not isinstance(records, list) or not all(isinstance(r, dict) for r in records):
        raise ConfigurationError(f"{path}: expected a list of trial objects (or {{'trials': [...]}})")
    for r in records:
        unknown = [k for k in r if k not in BATCH_COLUMNS + OPTIONAL_COLUMNS]
        if unknown:
            raise ConfigurationError(f"{path}: unknown fields " + ", ".join(unknown))
    return _rows_from_records(records)


def read_batch(path: str | Path) -> list[BatchRow]:
    """Read a CSV or JSON batch file, picking the parser from the extension."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return read_batch_json(path)
    return read_batch_csv(path)


def summary_to_record(summary: EffectSummary) -> dict:
    ci = summary.ci
    return {
        "label": summary.label,
        "estimate": summary.estimate,
        "scale": summary.scale.value,
        "ci_lower": None if ci is None else ci.lower,
        "ci_upper": None if ci is None else ci.upper,
        "ci_level": None if ci is None else ci.level,
        "p": summary.p_two_sided,
        "direction": summary.benefit_direction.value,
        "design_effect": summary.design_effect,
    }
