import sys

import pytest

from carrier import corpus
from carrier.tri import Triangulation


@pytest.fixture
def single_tet():
    return Triangulation(1, {})


@pytest.fixture
def double_tet():
    return Triangulation.from_pairs(2, [((0, f), (1, f), (0, 1, 2)) for f in range(4)])


@pytest.fixture
def flap():
    return corpus.branched("flap-torus")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
