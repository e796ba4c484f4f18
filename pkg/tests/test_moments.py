from fractions import Fraction as F

import pytest

from definetti.intervals import parse_set
from definetti.moments import (MomentOracle, chi_moments, dist_from_moments, integrate_continuous,
                               moments_from_chi, point_mass_moments, price, uniform_moments)
from definetti.polynomials import Polynomial
from definetti.processes import ProcessSpec, as_marginal_oracle

S = parse_set


def test_uniform_moments_exact():
    m = uniform_moments(2)
    assert m.moment_lower((2, 1), 1) == F(1, 6)
    assert m.moment_upper((2, 1), 1) == F(1, 6)


def test_price_uses_signed_bounds():
    loose = MomentOracle(1, lambda e, f: F(1, 4), lambda e, f: F(1, 2))
    p = Polynomial(1, {(1,): 1, (2,): -1})
    value, _ = price(p, loose, 1)
    assert value == F(1, 4) - F(1, 2)


def test_dist_from_moments_point_mass():
    pm = point_mass_moments([F(1, 2)])
    col = [dist_from_moments(pm, (S("(1/4,3/4)"),), f) for f in range(1, 9)]
    assert col == sorted(col) and col[-1] <= 1 and col[-1] > F(1, 2)
    assert dist_from_moments(pm, (S("(3/4,1]"),), 8) == 0


def test_dist_from_moments_uniform_sound():
    u = uniform_moments(1)
    for text in ["(0,1/3)", "(1/4,3/4)", "(1/2,1]", "(0,1/4)|(1/2,3/4)"]:
        s = S(text)
        col = [dist_from_moments(u, (s,), f) for f in range(1, 10)]
        assert max(col) <= s.length()
        assert col == sorted(col)


def test_moments_from_chi_brackets_truth():
    chi = as_marginal_oracle(ProcessSpec("iid_uniform"))
    lo, hi = moments_from_chi(chi, [S("(0,1/2)"), S("(1/2,1]")], [2, 1], 3)
    assert lo == hi == F(1, 8)
    lo, hi = moments_from_chi(chi, [S("(0,1/2)")], [0], 3)
    assert lo == hi == 1


def test_chi_moments_wraps_oracle():
    chi = as_marginal_oracle(ProcessSpec("polya", alpha=F(1), beta=F(1)))
    m = chi_moments(chi, [S("(1/2,1]")])
    assert m.moment_lower((2,), 1) == F(1, 3)
    assert m.has_upper


@pytest.mark.parametrize("e,truth", [([1], F(1, 2)), ([2], F(1, 3))])
def test_integrate_continuous_brackets(e, truth):
    chi = as_marginal_oracle(ProcessSpec("iid_uniform"))
    prev = None
    for f in (2, 5, 10):
        lo, hi = integrate_continuous(chi, e, f)
        assert lo <= truth <= hi
        if prev:
            assert lo >= prev[0] and hi <= prev[1]
        prev = (lo, hi)
