import random

import pytest

from abelsurf.exactring import FieldSpec

# filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def f31():
    return FieldSpec.prime(31)


@pytest.fixture(scope="session")
def qw():
    return FieldSpec.rationals_omega()


@pytest.fixture(scope="session")
def q():
    return FieldSpec.rationals()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
