import math
from pathlib import Path

import pytest

from trialbf.effects import ConfidenceInterval, Direction, EffectSummary, LogEffect, Scale, log_transform

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def screening_summary() -> EffectSummary:
    # atrial-fibrillation screening trial, HR scale, power analysis assumed HR 0.7
    return EffectSummary(
        "screening", 0.96, Scale.HR, ConfidenceInterval(0.92, 1.00), 0.045, Direction.BELOW_ONE, 0.7
    )


def ecpr_summary() -> EffectSummary:
    # invasive resuscitation trial, OR scale, benefit above one
    return EffectSummary("ecpr", 1.63, Scale.OR, ConfidenceInterval(0.93, 2.85), 0.09, Direction.ABOVE_ONE)


@pytest.fixture
def ex1() -> LogEffect:
    return log_transform(screening_summary(), "prefer_p")


@pytest.fixture
def ex2() -> LogEffect:
    return log_transform(ecpr_summary(), "prefer_ci")


def rel_err(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def bf_rel_err(log_a: float, log_b: float) -> float:
    """Relative error of exp(log_a) against exp(log_b), without exponentiating."""
    return abs(math.expm1(log_a - log_b))


def assert_close(actual, expected, path="$"):
    """Structural equality with a relative tolerance on floats."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict) and actual.keys() == expected.keys(), path
        for k in expected:
            assert_close(actual[k], expected[k], f"{path}.{k}")
    elif isinstance(expected, list):
        assert isinstance(actual, list) and len(actual) == len(expected), path
        for i, (a, e) in enumerate(zip(actual, expected)):
            assert_close(a, e, f"{path}[{i}]")
    elif isinstance(expected, float):
        assert isinstance(actual, (int, float)) and not isinstance(actual, bool), path
        assert actual == pytest.approx(expected, rel=1e-9, abs=1e-300), path
    else:
        assert actual == expected, path


# one line per acceptance criterion, echoed again at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
