from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import interval_lists, open_sets
from definetti.intervals import (HIGH, LOW, OpenIntervalSet, as_rational, closure_subset,
                                 complement_of_closure, enumerate_refinements, normalize,
                                 parse_set, parse_set_tuple, refines, shrink)


def S(text):
    return parse_set(text)


def test_normalize_merges_overlaps():
    assert normalize([(0, F(1, 2)), (F(1, 4), F(3, 4))]) == OpenIntervalSet.of((0, "3/4"))


def test_normalize_empty():
    assert normalize([]).is_empty()


def test_normalize_clips_to_domain():
    s = normalize([(-1, F(1, 4)), (F(1, 2), 2)])
    assert s.intervals == ((LOW, F(1, 4)), (F(1, 2), HIGH))
    assert s.contains(0) and s.contains(1) and not s.contains(F(1, 3))


def test_touching_open_intervals_stay_apart():
    s = normalize([(0, F(1, 2)), (F(1, 2), 1)])
    assert len(s) == 2 and not s.contains(F(1, 2))


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_refines_examples():
    assert refines((S("(1/4,1/2)"),), (S("(0,1)"),))
    assert not refines((S("(0,1)"),), (S("(0,1)"),))
    assert not refines((S("(1/4,1/2)"), S("(1/4,1/2)")), (S("(0,1)"), S("(0,3/8)")))
    assert refines((S("[0,1]"),), (S("[0,1]"),))


def test_refines_arity_mismatch():
    with pytest.raises(ValueError):
        refines((S("(0,1)"),), (S("(0,1)"), S("(0,1)")))


def test_complement_examples():
    assert complement_of_closure(S("(1/4,1/2)")) == S("[0,1/4)|(1/2,1]")
    assert complement_of_closure(OpenIntervalSet.empty()).is_full()
    assert complement_of_closure(OpenIntervalSet.full()).is_empty()


def test_closure_relative_to_domain():
    assert S("[0,1/4)").closure() == ((0, F(1, 4)),)
    assert S("(0,1/4)").closure_contains(0)


def test_enumerate_refinements_contains_grid_point():
    assert (S("(1/4,3/4)"),) in enumerate_refinements((S("(0,1)"),), 4)


def test_enumerate_refinements_tiny_fuel():
    assert enumerate_refinements((S("(0,1)"),), 1) == []


def test_shrink():
    assert shrink(S("(1/4,3/4)"), F(1, 8)) == S("(3/8,5/8)")
    assert shrink(S("[0,1/2)"), F(1, 8)) == S("[0,3/8)")


def test_parsing():
    assert parse_set("{}").is_empty()
    assert parse_set("(1/2,1]") == OpenIntervalSet(((F(1, 2), HIGH),))
    assert len(parse_set_tuple("(0,1/2);[0,1]|(1/3,1/2)")) == 2
    with pytest.raises(ValueError):
        parse_set("[1/4,1/2)")
    assert parse_set("(2,3)", domain=(F(1), F(5))) == S("(1/4,1/2)")


@given(interval_lists())
def test_normalize_idempotent(xs):
    s = normalize(xs)
    assert normalize(s.intervals) == s


@given(interval_lists(), st.randoms())
def test_normalize_order_independent(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    assert normalize(xs) == normalize(ys)


@given(interval_lists(), st.integers(0, 24))
def test_normalize_preserves_membership(xs, j):
    x = F(j, 24)
    assert normalize(xs).contains(x) == any(a < x < b for a, b in xs)


@given(open_sets())
def test_complement_twice_is_interior_of_closure(s):
    twice = complement_of_closure(complement_of_closure(s))
    # interior of the closure: s plus any isolated gap points
    assert s.subset_of(twice)
    assert twice.length() == s.length()
    for j in range(0, 49):
        x = F(j, 48)
        if x not in [p for iv in s.closure() for p in iv]:
            assert twice.contains(x) == s.closure_contains(x)


@given(open_sets())
def test_refines_irreflexive_when_touching_boundary(s):
    if not s.is_empty() and not s.is_full():
        assert not refines((s,), (s,))


@given(open_sets(), open_sets(), open_sets())
def test_refines_transitive(a, b, c):
    if refines((a,), (b,)) and refines((b,), (c,)):
        assert refines((a,), (c,))


@pytest.mark.parametrize("pi", ["(0,1)", "(1/4,3/4)", "[0,1/2)|(2/3,1]", "(1/2,1]"])
def test_enumeration_members_refine_and_prefix(pi):
    pi = (S(pi),)
    prev = []
    for n in range(1, 9):
        cur = enumerate_refinements(pi, n)
        assert all(refines(s, pi) for s in cur)
        assert cur[:len(prev)] == prev
        prev = cur


def test_enumeration_two_coordinates():
    pi = (S("(1/4,3/4)"), S("[0,1/2)"))
    for n in (4, 6):
        assert all(refines(s, pi) for s in enumerate_refinements(pi, n))


@given(open_sets(), open_sets())
def test_closure_subset_implies_subset(a, b):
    if closure_subset(a, b):
        assert a.subset_of(b) or a.is_empty()
