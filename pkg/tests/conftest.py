import numpy as np
import pytest

from ptmpemba.model import IDENTITY, SIGMA_Y, SIGMA_Z

EXCITED = (SIGMA_Z + IDENTITY) / 2
MIXED = IDENTITY / 2
# state used for the right-of-LEP phase map (gamma2 = 0.5)
TILTED = IDENTITY / 2 - 0.3 * SIGMA_Z - 0.2 * SIGMA_Y


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def explicit_qubit_l0(a, g1, g2):
    """4x4 single-qubit generator typed in by hand, independent of model.py."""
    h = -(g1 + g2) / 2
    return np.array(
        [
            [2 * a - g2, -1j, 1j, g1],
            [-1j, h, 0, 1j],
            [1j, 0, h, -1j],
            [g2, 1j, -1j, -2 * a - g1],
        ]
    )


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
