import sys
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from preserver_lab.polycore import RatPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_rats = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw, max_degree=5, elements=rats):
    return RatPoly(draw(st.lists(elements, min_size=0, max_size=max_degree + 1)))


@pytest.fixture
def P():
    from preserver_lab.polycore import parse_poly
    return parse_poly


F = Fraction


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
