import math

import pytest

from peanoquad import integrands
from peanoquad.kernel import Interval


@pytest.fixture
def unit():
    return Interval(0.0, 1.0)


@pytest.fixture
def one_two():
    return Interval(1.0, 2.0)


@pytest.fixture
def square(unit):
    return integrands.poly(unit, [0, 0, 1], label="t^2")


@pytest.fixture
def cube(one_two):
    return integrands.power(one_two, 3.0)


def rel_close(u, v, rtol):
    return abs(u - v) <= rtol * max(abs(u), abs(v), math.ulp(1.0))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
