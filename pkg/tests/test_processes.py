import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from definetti.processes import (MeasureSpec, ProcessSpec, SamplerState, SpecError,
                                 as_marginal_oracle, as_mu_oracle, beta_cdf, directing_sampler,
                                 polya_counts, polya_marginal, polya_sequential,
                                 recognize_beta_bernoulli, sample_sequence)

params = st.fractions(min_value=F(1, 10), max_value=5, max_denominator=10)
patterns = st.text(alphabet="01", min_size=0, max_size=7)


@given(params, params, patterns)
def test_urn_matches_closed_form(a, b, pat):
    assert polya_marginal(a, b, pat) == polya_sequential(a, b, pat)


@given(params, params, patterns)
def test_kolmogorov_consistency(a, b, pat):
    total = polya_marginal(a, b, pat + "0") + polya_marginal(a, b, pat + "1")
    assert total == polya_marginal(a, b, pat)


@given(params, params, st.integers(1, 6))
def test_patterns_sum_to_one(a, b, n):
    assert sum(polya_marginal(a, b, "".join(p)) for p in itertools.product("01", repeat=n)) == 1


@given(params, params, patterns, st.data())
def test_pattern_exchangeable(a, b, pat, data):
    perm = "".join(data.draw(st.permutations(pat)))
    assert polya_marginal(a, b, pat) == polya_marginal(a, b, perm)


def test_uniform_prior_marginals():
    assert polya_counts(F(1), F(1), 2, 1) == F(1, 12)


def test_beta_cdf_known_values():
    assert beta_cdf(1, 1, F(1, 3)) == F(1, 3)
    assert beta_cdf(2, 1, F(1, 2)) == F(1, 4)
    assert beta_cdf(1, 2, F(1, 2)) == F(3, 4)


def test_spec_validation():
    with pytest.raises(SpecError):
        ProcessSpec("polya", alpha=F(0), beta=F(1))
    with pytest.raises(SpecError):
        ProcessSpec("iid_bernoulli_mixture", mixture=((F(1, 2), F(1, 2)),))
    with pytest.raises(SpecError):
        ProcessSpec("constant_atom", atom=F(3, 2))
    with pytest.raises(SpecError):
        ProcessSpec("nonsense")


def test_non_integer_beta_needs_opt_in():
    spec = MeasureSpec("beta_bernoulli", alpha=F(3, 2), beta=F(5, 2))
    with pytest.raises(SpecError):
        as_mu_oracle(spec)
    assert as_mu_oracle(spec, allow_moments=True) is not None


@given(params, params)
def test_recognizer_identity(a, b):
    rec = recognize_beta_bernoulli(as_marginal_oracle(ProcessSpec("polya", alpha=a, beta=b)), depth=5)
    assert rec.measure.kind == "beta_bernoulli"
    assert (rec.measure.alpha, rec.measure.beta) == (a, b)


def test_recognizer_iid_coin():
    mix = ProcessSpec("iid_bernoulli_mixture", mixture=((F(1), F(1, 3)),))
    rec = recognize_beta_bernoulli(as_marginal_oracle(mix), depth=6)
    assert rec.measure.kind == "bernoulli_mixture"


def test_recognizer_rejects_two_coin_mixture():
    mix = ProcessSpec("iid_bernoulli_mixture", mixture=((F(1, 2), F(0)), (F(1, 4), F(1, 2)), (F(1, 4), F(1))))
    rec = recognize_beta_bernoulli(as_marginal_oracle(mix), depth=6)
    assert rec.measure is None and rec.rejected


@pytest.mark.parametrize("spec", [ProcessSpec("polya", alpha=F(1), beta=F(2)), ProcessSpec("iid_uniform"),
                                  ProcessSpec("constant_uniform")])
def test_sampler_deterministic(spec):
    a = sample_sequence(SamplerState(spec, 7), 20)
    b = sample_sequence(SamplerState(spec, 7), 20)
    c = sample_sequence(SamplerState(spec, 8), 20)
    assert a == b and a != c


def test_sampler_extends_state():
    st_ = SamplerState(ProcessSpec("polya", alpha=F(1), beta=F(1)), 3)
    first = sample_sequence(st_, 5)
    sample_sequence(st_, 5)
    assert st_.history[:5] == first and len(st_.history) == 10
    assert st_.red == 1 + sum(st_.history)


def test_polya_frequency_of_first_draws():
    spec = ProcessSpec("polya", alpha=F(2), beta=F(1))
    n = 4000
    ones = sum(sample_sequence(SamplerState(spec, s), 2) == [1, 1] for s in range(n))
    # Pr(11) = 2/3 * 3/4 = 1/2; tolerance ~ 4.5 standard errors
    assert abs(ones / n - 0.5) < 4.5 * (0.25 / n) ** 0.5


def test_directing_sampler_matches_urn_statistics():
    spec = MeasureSpec("beta_bernoulli", alpha=F(2), beta=F(1))
    n = 4000
    hits = 0
    for s in range(n):
        draw = directing_sampler(spec, s)
        hits += draw() == 1 and draw() == 1
    assert abs(hits / n - 0.5) < 4.5 * (0.25 / n) ** 0.5


def test_constant_uniform_repeats_value():
    out = sample_sequence(SamplerState(ProcessSpec("constant_uniform"), 1), 4)
    assert len(set(out)) == 1
