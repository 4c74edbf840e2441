import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from milburnosc.normal_modes import SystemParams, derive_modes  # noqa: E402


@pytest.fixture
def iso_params():
    return SystemParams(1.0, 1.0, 0.2, 100.0)


@pytest.fixture
def iso_modes(iso_params):
    return derive_modes(iso_params)


@pytest.fixture
def aniso_modes():
    return derive_modes(SystemParams(1.0, 0.5, 0.45, 100.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for key in sorted(REPORT):
            terminalreporter.write_line(REPORT[key])
