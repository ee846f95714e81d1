import numpy as np
import pytest

from cfcalc.operators import SampledFunction, UniformGrid


@pytest.fixture
def sample():
    """Sample a vectorised callable on [a, b] with step dt."""

    def _sample(fn, a, b, dt):
        return SampledFunction.from_callable(fn, UniformGrid.from_step(a, b, dt))

    return _sample


def max_err(x, y):
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdicts at the end of the run, one line each."""
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
