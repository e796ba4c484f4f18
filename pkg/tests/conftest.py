from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from definetti.intervals import OpenIntervalSet

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


def rationals(max_den=12, lo=-1, hi=2):
    return st.builds(Fraction, st.integers(lo * max_den, hi * max_den), st.just(max_den))


@st.composite
def interval_lists(draw, max_len=4, max_den=12):
    n = draw(st.integers(0, max_len))
    out = []
    for _ in range(n):
        a = draw(rationals(max_den))
        b = draw(rationals(max_den))
        out.append((min(a, b), max(a, b)))
    return out


@st.composite
def open_sets(draw, max_len=3, max_den=8):
    return OpenIntervalSet(tuple(draw(interval_lists(max_len, max_den))))


@pytest.fixture
def F():
    return Fraction
