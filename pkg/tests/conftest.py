import math

import numpy as np
import pytest

from bearing_tma import TmaParams


@pytest.fixture
def reference_target():
    return TmaParams([10.0, 5.0], [1.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


DEG = math.pi / 180


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
