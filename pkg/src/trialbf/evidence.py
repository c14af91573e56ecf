"""Qualitative evidence bands for Bayes factors (1/3/10/100 ladder)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from trialbf.errors import DomainError


class Category(str, enum.Enum):
    DECISIVE_NULL = "decisive_null"
    STRONG_NULL = "strong_null"
    MODERATE_NULL = "moderate_null"
    WEAK_NULL = "weak_null"
    NONE = "none"
    WEAK_ALT = "weak_alt"
    MODERATE_ALT = "moderate_alt"
    STRONG_ALT = "strong_alt"
    DECISIVE_ALT = "decisive_alt"


# BF below the cut -> category on the left; the bands mirror under 1/BF
_NULL_SIDE = (
    (1 / 100, Category.DECISIVE_NULL),
    (1 / 10, Category.STRONG_NULL),
    (1 / 3, Category.MODERATE_NULL),
    (1.0, Category.WEAK_NULL),
)
# BF at or below the cut -> category on the left
_ALT_SIDE = (
    (3.0, Category.WEAK_ALT),
    (10.0, Category.MODERATE_ALT),
    (100.0, Category.STRONG_ALT),
)
_NULL_CUTS = [(math.log(c), cat) for c, cat in _NULL_SIDE]
_ALT_CUTS = [(math.log(c), cat) for c, cat in _ALT_SIDE]


@dataclass(frozen=True)
class EvidenceLabel:
    log_bf: float
    category: Category

    @property
    def bf(self) -> float:
        return math.exp(self.log_bf) if self.log_bf < 709 else math.inf


def classify_log_bf(log_bf: float) -> EvidenceLabel:
    """Band for a log Bayes factor; works where BF itself would underflow."""
    if math.isnan(log_bf):
        raise DomainError("log Bayes factor is NaN")
    if log_bf == 0:
        return EvidenceLabel(log_bf, Category.NONE)
    if log_bf < 0:
        for cut, cat in _NULL_CUTS:
            if log_bf < cut:
                return EvidenceLabel(log_bf, cat)
    for cut, cat in _ALT_CUTS:
        if log_bf <= cut:
            return EvidenceLabel(log_bf, cat)
    return EvidenceLabel(log_bf, Category.DECISIVE_ALT)


def classify_evidence(bf: float) -> EvidenceLabel:
    if not bf > 0:
        raise DomainError(f"Bayes factor must be positive, got {bf}")
    return classify_log_bf(math.log(bf))
