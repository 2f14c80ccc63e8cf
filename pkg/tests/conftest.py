import numpy as np
import pytest

from ldpclab.codes import load_code
from ldpclab.pcm import SparseBinaryMatrix

SHIPPED = ["wifi-r12", "wifi-r58", "wifi-r34", "wifi-r1316", "rootcheck-r12", "peg96", "ira96"]


@pytest.fixture
def tiny():
    return SparseBinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])


@pytest.fixture
def square4():
    return SparseBinaryMatrix.from_dense([[1, 1], [1, 1]])


@pytest.fixture(scope="session")
def peg96():
    return load_code("peg96")


@pytest.fixture(scope="session")
def wifi12():
    return load_code("wifi-r12")


@pytest.fixture(scope="session")
def rootcheck():
    return load_code("rootcheck-r12")


def random_sparse(rng, m, n, density=0.3):
    a = (rng.random((m, n)) < density).astype(np.uint8)
    return SparseBinaryMatrix.from_dense(a)


# one summary line per acceptance criterion, printed after the test run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
