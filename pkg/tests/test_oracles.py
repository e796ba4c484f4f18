import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import open_sets
from definetti.intervals import OpenIntervalSet, parse_set
from definetti.oracles import (ALWAYS, MarginalOracle, algebra_lower, closed_upper, constraint_matrix,
                               make_event, moment_bounds, reduce_upset)
from definetti.processes import ProcessSpec, as_marginal_oracle

S = parse_set

PROCESSES = [ProcessSpec("polya", alpha=F(3, 2), beta=F(5, 2)), ProcessSpec("iid_uniform"),
             ProcessSpec("constant_uniform"), ProcessSpec("constant_atom", atom=F(1, 3)),
             ProcessSpec("iid_bernoulli_mixture", mixture=((F(1, 2), F(1, 5)), (F(1, 2), F(4, 5))))]
ORACLES = [as_marginal_oracle(p) for p in PROCESSES]


class BoxOnly(MarginalOracle):
    """Strips an exact oracle down to its box interface."""

    def __init__(self, inner):
        self.inner = inner

    def box_lower(self, sigma, fuel):
        return self.inner.box_lower(sigma, fuel)


def test_make_event_merges_repeats():
    a = S("(0,1/2)")
    assert make_event([a, a]) == ((a, 2, False),)
    with pytest.raises(ValueError):
        make_event([a], [-1])


def test_iid_uniform_is_product_of_lengths():
    chi = as_marginal_oracle(ProcessSpec("iid_uniform"))
    assert algebra_lower(chi, (S("(0,1/2)"), S("(1/4,1]")), 1) == F(3, 8)


def test_constant_uniform_intersects():
    chi = as_marginal_oracle(ProcessSpec("constant_uniform"))
    assert algebra_lower(chi, (S("(0,1/2)"), S("(1/4,1]")), 1) == F(1, 4)


def test_atom_closed_vs_open():
    chi = as_marginal_oracle(ProcessSpec("constant_atom", atom=F(1, 2)))
    assert algebra_lower(chi, (S("(0,1/2)"),), 3) == 0
    assert closed_upper(chi, (S("(0,1/2)"),), 3) == 1


def test_moment_bounds_bracket_exact_value():
    chi = as_marginal_oracle(ProcessSpec("polya", alpha=F(1), beta=F(1)))
    lo, hi = moment_bounds(chi, [S("(1/2,1]")], [3], 2)
    assert lo == hi == F(1, 4)


def test_constraint_matrix_validation():
    with pytest.raises(ValueError):
        constraint_matrix([[F(1, 2)], [F(1, 2), F(1, 3)]])
    with pytest.raises(ValueError):
        constraint_matrix([])


def test_reduce_upset_decides_trivial_queries():
    full, empty, mid = OpenIntervalSet.full(), OpenIntervalSet.empty(), S("(0,1/2)")
    assert reduce_upset((full,), ((F(1, 2),),)) is True
    assert reduce_upset((empty,), ((F(0),),)) is False
    assert reduce_upset((mid,), ((F(1),),)) is False
    assert reduce_upset((mid, full), ((F(1, 3), F(0)),)) == ((F(1, 3), ALWAYS),)


family = [S("(0,1/2)"), S("(1/2,1]"), S("(1/4,3/4)"), S("[0,1/3)|(2/3,1]"), S("(1/3,2/3)")]
tuples = st.lists(st.sampled_from(family), min_size=1, max_size=4)


@pytest.mark.parametrize("chi", ORACLES, ids=[p.kind for p in PROCESSES])
@given(sigma=tuples, data=st.data())
def test_exchangeable(chi, sigma, data):
    perm = data.draw(st.permutations(sigma))
    assert algebra_lower(chi, tuple(sigma), 2) == algebra_lower(chi, tuple(perm), 2)


@pytest.mark.parametrize("chi", ORACLES, ids=[p.kind for p in PROCESSES])
@given(sigma=tuples)
def test_marginal_consistency(chi, sigma):
    padded = tuple(sigma) + (OpenIntervalSet.full(),)
    assert algebra_lower(chi, tuple(sigma), 2) == algebra_lower(chi, padded, 2)


@pytest.mark.parametrize("chi", ORACLES, ids=[p.kind for p in PROCESSES])
@given(sigma=tuples)
def test_closed_upper_dominates_open_lower(chi, sigma):
    assert closed_upper(chi, tuple(sigma), 3) >= algebra_lower(chi, tuple(sigma), 3)


@pytest.mark.parametrize("chi", ORACLES[:3], ids=[p.kind for p in PROCESSES[:3]])
def test_generic_path_is_sound(chi):
    boxed = BoxOnly(chi)
    for sigma in itertools.product(family, repeat=2):
        exact_closed = chi.event_prob(make_event(list(sigma), closed=True))
        ups = [closed_upper(boxed, sigma, f) for f in (1, 2, 4)]
        assert all(u >= exact_closed for u in ups)
        assert algebra_lower(boxed, sigma, 2) <= algebra_lower(chi, sigma, 2)


@given(open_sets(), open_sets())
def test_lower_bounds_monotone_in_set(a, b):
    chi = ORACLES[1]
    small = a.intersection(b)
    assert algebra_lower(chi, (small,), 1) <= algebra_lower(chi, (a,), 1)
