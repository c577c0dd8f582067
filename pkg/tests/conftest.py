import random

import pytest
from hypothesis import strategies as st

from facetlab import IncidenceMatrix, parse_incidence

FIG1_TEXT = "5 4\n1111\n1100\n0110\n0011\n1001"
SEG_TEXT = "2 2\n10\n01"

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def fig1() -> IncidenceMatrix:
    return parse_incidence(FIG1_TEXT)


@pytest.fixture
def seg() -> IncidenceMatrix:
    return parse_incidence(SEG_TEXT)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260514)


@st.composite
def matrices(draw, max_n: int = 6, max_m: int = 7) -> IncidenceMatrix:
    """Arbitrary 0/1 matrices without zero rows (not necessarily polyhedral)."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    rows = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=m, max_size=m))
    return IncidenceMatrix(n, tuple(rows))


def shuffled(A: IncidenceMatrix, rng: random.Random) -> tuple[IncidenceMatrix, list[int], list[int]]:
    rp = list(range(A.m))
    cp = list(range(A.n))
    rng.shuffle(rp)
    rng.shuffle(cp)
    return A.permuted(rp, cp), rp, cp


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[2:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
