from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from definetti.reals import (BracketReal, LowerReal, UpperReal, lower_sup, signed_sum,
                             upper_from_complement)


def approach_from_below(t):
    return LowerReal(lambda n: t - F(1, n))


def approach_from_above(t):
    return UpperReal(lambda n: t + F(1, n))


def test_running_max_makes_streams_monotone():
    wobbly = LowerReal.running_max(lambda n: F(1, 2) - F(n % 3, 10))
    col = wobbly.column(range(1, 10))
    assert col == sorted(col)


def test_running_min():
    u = UpperReal.running_min(lambda n: F(1) - F(n % 2, 3) if n > 1 else F(1))
    col = u.column(range(1, 8))
    assert col == sorted(col, reverse=True)


def test_fuel_must_be_positive():
    with pytest.raises(ValueError):
        LowerReal.exact(F(1, 2)).bound_at(0)


def test_bracket():
    b = BracketReal(approach_from_below(F(1, 3)), approach_from_above(F(1, 3)))
    assert b.width_at(10) == F(1, 5)
    assert BracketReal.exact(F(2, 3)).bounds_at(3) == (F(2, 3), F(2, 3))


def test_lower_sup_finite_and_enumerated():
    fam = [LowerReal.exact(F(1, 4)), LowerReal.exact(F(3, 4)), LowerReal.exact(F(1, 2))]
    s = lower_sup(fam)
    assert s.bound_at(1) == F(1, 4)
    assert s.bound_at(2) == F(3, 4)
    enum = lower_sup(lambda i: LowerReal.exact(1 - F(1, i)))
    col = enum.column(range(1, 6))
    assert col == sorted(col) and col[-1] == F(4, 5)


def test_signed_sum_sign_pairing():
    s = signed_sum([2, -1, 0], [LowerReal.exact(F(1, 2))], [UpperReal.exact(F(1, 3))])
    assert s.bound_at(1) == F(2, 3)
    with pytest.raises(ValueError):
        signed_sum([1, -1], [LowerReal.exact(0)], [])


def test_upper_from_complement():
    u = upper_from_complement(1, approach_from_below(F(1, 4)))
    assert u.bound_at(4) == F(1)
    assert u.bound_at(100) < F(4, 5)


targets = st.fractions(min_value=0, max_value=1, max_denominator=20)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@given(st.lists(st.tuples(coeffs, targets), min_size=1, max_size=6), st.integers(1, 50))
def test_signed_sum_sound_and_monotone(pairs, n):
    cs = [c for c, _ in pairs]
    lowers = [approach_from_below(t) for c, t in pairs if c > 0]
    uppers = [approach_from_above(t) for c, t in pairs if c < 0]
    s = signed_sum(cs, lowers, uppers)
    exact = sum((c * t for c, t in pairs), F(0))
    assert s.bound_at(n) <= exact
    assert s.bound_at(n) <= s.bound_at(n + 1)
