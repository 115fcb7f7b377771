import random

import pytest

from ellcot.modular import CharMatrix
from ellcot.thetakron import ModularParameter


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def mp_i():
    return ModularParameter(1j)


@pytest.fixture(scope="session")
def mp_gen():
    return ModularParameter(0.3 + 1.1j)


@pytest.fixture
def M_generic():
    return CharMatrix.of(0.21, 0.37, 0.13, 0.58)


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Append one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""
    def _record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
