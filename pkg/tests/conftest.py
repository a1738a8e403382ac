import numpy as np
import pytest

from cxhyp.ball import BallForm, IsometryMatrix

SQRT2 = np.sqrt(2.0)


def sqrt2_hyperbolic() -> IsometryMatrix:
    return IsometryMatrix.of(np.array([[SQRT2, 0, 1], [0, 1, 0], [1, 0, SQRT2]]), BallForm(2))


@pytest.fixture
def hyp():
    return sqrt2_hyperbolic()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# acceptance lines are collected here and echoed in the terminal summary,
# so they show up even when pytest captures stdout
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
