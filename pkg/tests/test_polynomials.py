from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from definetti.intervals import parse_set
from definetti.polynomials import (Polynomial, diagonal, indicator_poly,
                                   indicator_poly_for_constraints, priced, q_polynomial,
                                   smoothstep, split_signs)

S = parse_set

coeff = st.fractions(min_value=-4, max_value=4, max_denominator=6)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coeff, max_size=6).map(lambda t: Polynomial(2, t))
points = st.tuples(*[st.fractions(min_value=0, max_value=1, max_denominator=16)] * 2)


def test_arithmetic():
    x = Polynomial.univariate([0, 1])
    assert (x * x - x).evaluate([F(1, 2)]) == F(-1, 4)
    assert (x - x).is_zero()
    assert Polynomial.constant(1, 3).degree() == 0


def test_arity_mismatch():
    with pytest.raises(ValueError):
        Polynomial(1, {(1,): 1}) + Polynomial(2, {(1, 0): 1})


@given(polys, points)
def test_split_signs_reassembles(p, x):
    plus, minus = split_signs(p)
    assert plus - minus == p
    assert all(c > 0 for c in plus.terms.values())
    assert all(c > 0 for c in minus.terms.values())
    assert plus.evaluate(x) - minus.evaluate(x) == p.evaluate(x)


@given(polys, points)
def test_q_polynomial_identity(p, x):
    # q(x, 1 - x) agrees with p(x) on the simplex diagonal
    q = q_polynomial(p)
    assert diagonal(q).evaluate(x) == p.evaluate(x)


@given(polys)
def test_priced_matches_direct_sum(p):
    def val(e, positive):
        return F(1, 2 + sum(e)) if positive else F(1, 1 + sum(e))
    direct = sum((c * val(e, c > 0) for e, c in p.terms.items()), F(0))
    assert priced(p, val) == direct


def test_smoothstep_endpoints():
    w = F(1, 4)
    assert smoothstep(F(0), w) == 0 and smoothstep(w, w) == 1 and smoothstep(w / 2, w) == F(1, 2)


@pytest.mark.parametrize("text", ["(1/4,3/4)", "[0,1/3)", "(1/4,1/2)|(3/5,1]", "(1/2,1]"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_indicator_dominated(text, n):
    s = S(text)
    approx = indicator_poly(n, (s,))
    for j in range(201):
        x = F(j, 200)
        v = approx.evaluate([x])
        assert -1 <= v <= (1 if s.contains(x) else 0)


def test_indicator_polynomial_matches_evaluator():
    approx = indicator_poly(2, (S("(1/4,3/4)"),))
    p = approx.polynomial
    for j in range(0, 11):
        x = [F(j, 10)]
        assert p.evaluate(x) == approx.evaluate(x)


def test_approximation_improves_inside():
    s = S("(1/4,3/4)")
    vals = [indicator_poly(n, (s,)).evaluate([F(1, 2)]) for n in (2, 4, 8)]
    assert vals[-1] > F(1, 2)


def test_constraint_union_dominated():
    C = ((F(1, 2), F(-1)), (F(-1), F(3, 4)))
    approx = indicator_poly_for_constraints(3, C)
    for i in range(11):
        for j in range(11):
            x = (F(i, 10), F(j, 10))
            inside = x[0] > F(1, 2) or x[1] > F(3, 4)
            v = approx.evaluate(x)
            assert -1 <= v <= (1 if inside else 0)
