import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qifalgebra import Channel, Prior  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def three_secret():
    X = ["x1", "x2", "x3"]
    c = Channel(X, ["y1", "y2", "y3", "y4"], [[1 / 6, 2 / 3, 1 / 6, 0], [1 / 2, 1 / 4, 1 / 4, 0], [1 / 2, 1 / 3, 0, 1 / 6]])
    return c, Prior(X, [1 / 2, 1 / 3, 1 / 6])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
