import numpy as np
import pytest

from gegopt.core import SearchSpace


def sphere(x):
    return float(np.sum(np.asarray(x) ** 2))


@pytest.fixture
def box2():
    return SearchSpace.box(-100.0, 100.0, 2)


@pytest.fixture
def unit2():
    return SearchSpace.box(-1.0, 1.0, 2)


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still asserts on its own."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_CRITERIA):
            terminalreporter.write_line(line)
