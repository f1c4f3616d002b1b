import numpy as np
import pytest

from photondfs.lindblad import CouplingModel, build_generator, preset_correlation


@pytest.fixture
def pair_generator():
    """Anticorrelated two-photon generator at gamma = 1."""
    return build_generator(CouplingModel(2, preset_correlation("anticorrelated_pair", 2), 1.0))


@pytest.fixture
def single_generator():
    """Single-photon depolarizing generator at gamma = 1."""
    return build_generator(CouplingModel(1, preset_correlation("single_depolarizing", 1), 1.0))


def max_abs(a):
    return float(np.abs(np.asarray(a)).max())


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, title = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}")
