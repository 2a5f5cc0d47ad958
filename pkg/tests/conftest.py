import warnings
from fractions import Fraction

import pytest

from hyposhift.shifts import HypothesisWarning, family_figure2

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def family():
    def make(a2, y2):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", HypothesisWarning)
            return family_figure2(Fraction(a2), Fraction(y2))
    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
