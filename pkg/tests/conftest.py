import numpy as np
import pytest

from phikcorr.numerics import RngStream


@pytest.fixture
def rng():
    return RngStream(20240607).generator()


def pytest_configure(config):
    np.set_printoptions(precision=6, suppress=True)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
