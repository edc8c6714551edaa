import sys

import pytest

from oracles import rank_one_base
from seifert_calc.seifert import SeifertData


@pytest.fixture
def p1_base():
    return rank_one_base([1, 1])


@pytest.fixture
def p1_data(p1_base):
    return SeifertData(p1_base, p1_base.clX.element((-1,)), ((1, 2), (2, 3)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
