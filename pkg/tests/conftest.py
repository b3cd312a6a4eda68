import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def half_half():
    """k = 1 measure with mass 1/2 at -1 and at 1."""
    from bandedspec import MatrixMeasure

    return MatrixMeasure.from_weights([-1.0, 1.0], [[[0.5]], [[0.5]]])
