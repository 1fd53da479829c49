import numpy as np
import pytest

from timechange import FrequencyGrid


@pytest.fixture
def xi_grid():
    return np.linspace(0.01, 8.0, 800)


@pytest.fixture
def wide_grid():
    return FrequencyGrid.uniform(200.0, 4001)


_ACCEPTANCE = "acceptance_lines"


@pytest.fixture
def criterion(request):
    """Record one acceptance line and fail the test if it did not pass."""
    lines = request.config.__dict__.setdefault(_ACCEPTANCE, [])

    def check(label, passed, detail):
        lines.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
        assert passed, f"{label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get(_ACCEPTANCE)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
