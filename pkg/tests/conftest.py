import numpy as np
import pytest

from ebilliard import _pykernels
from ebilliard.billiard import Billiard

try:
    from ebilliard import _ckernels
except ImportError:
    _ckernels = None

KERNELS = [pytest.param(_pykernels, id="python")]
KERNELS.append(
    pytest.param(_ckernels, id="cython")
    if _ckernels is not None
    else pytest.param(None, id="cython", marks=pytest.mark.skip(reason="extension not built"))
)


@pytest.fixture(params=KERNELS)
def kernels(request):
    return request.param


@pytest.fixture
def B15():
    return Billiard(1.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# Acceptance lines collected by test_acceptance.py, echoed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
