import sys

import pytest
from hypothesis import strategies as st

from loopalg.hyperbolic import rep_modular, rep_once_holed_torus, rep_pair_of_pants

letters = st.sampled_from([1, -1, 2, -2])
words = st.lists(letters, max_size=8).map(tuple)
short_words = st.lists(letters, min_size=1, max_size=4).map(tuple)


@pytest.fixture(scope="session")
def modular():
    return rep_modular()


@pytest.fixture(scope="session")
def torus():
    return rep_once_holed_torus(3, 3, 4)


@pytest.fixture(scope="session")
def torus2():
    return rep_once_holed_torus(3, 4, 5)


@pytest.fixture(scope="session")
def pants():
    return rep_pair_of_pants(1.0, 1.5, 2.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
