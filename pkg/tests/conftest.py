import sys

import numpy as np
import pytest

from impreciseflow import ImpreciseTerrain


def line(low, high=None, spacing=1.0):
    """Path graph along the x axis."""
    low = np.asarray(low, dtype=float)
    high = low if high is None else np.asarray(high, dtype=float)
    n = len(low)
    pos = np.stack([np.arange(n) * spacing, np.zeros(n)], axis=1)
    return ImpreciseTerrain(pos, low, high, [(i, i + 1) for i in range(n - 1)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line_ in mod.report_lines():
        terminalreporter.write_line(line_)
