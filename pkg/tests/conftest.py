import pytest
from hypothesis import HealthCheck, settings, strategies as st

import _report
from countfun.formal import FormalSum
from countfun.words import Mode, free_reduce

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

M2 = Mode.monoid(2)
M3 = Mode.monoid(3)
G2 = Mode.group(2)

GRIGORCHUK = {(1, 2): 1, (-1, 2): 1, (1, -2): 1, (-1, -2): 1,
              (-2, -1): -1, (-2, 1): -1, (2, -1): -1, (2, 1): -1}
DEPENDENCY_F = {(-1, 2): 1, (-1, -2): 1, (2, 1): 1, (2, 2): 1,
             (-2, 1): 1, (-2, -2): 1, (2,): -1, (-2,): -1}


@pytest.fixture
def grigorchuk():
    return FormalSum(G2, GRIGORCHUK)


@pytest.fixture
def dependency_f():
    return FormalSum(G2, DEPENDENCY_F)


def letters_of(mode):
    return st.sampled_from(mode.letters())


def words(mode, min_size=0, max_size=6):
    raw = st.lists(letters_of(mode), min_size=min_size, max_size=max_size)
    return raw.map(lambda xs: free_reduce(xs, mode)).filter(lambda w: len(w) >= min_size)


def sums(mode, max_len=3, max_terms=5):
    term = st.tuples(words(mode, 0, max_len), st.integers(-3, 3))
    return st.lists(term, max_size=max_terms).map(lambda ts: FormalSum(mode, ts))


modes = st.sampled_from([M2, M3, G2, Mode.group(3)])


def pytest_terminal_summary(terminalreporter):
    lines = _report.lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
