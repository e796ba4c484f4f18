"""Built-in exchangeable processes, their de Finetti measures, and samplers.

Binary processes live on the outcomes {0, 1}, embedded in [0, 1]; a set
"contains the outcome 1" iff 1 lies in it under the clipped semantics.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .intervals import HIGH, LOW, OpenIntervalSet, as_rational, normalize
from .oracles import ALWAYS, MarginalOracle, RightOrderOracle, make_event

ZERO = Fraction(0)
ONE = Fraction(1)

PROCESS_KINDS = ("polya", "iid_uniform", "constant_uniform", "constant_atom",
                 "iid_bernoulli_mixture")
MEASURE_KINDS = ("beta_bernoulli", "dirac_at_uniform", "uniform_on_diracs", "dirac_at_atom",
                 "bernoulli_mixture", "definetti_oracle")
BINARY_KINDS = ("polya", "iid_bernoulli_mixture")


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ProcessSpec:
    kind: str
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    atom: Optional[Fraction] = None
    mixture: Tuple[Tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        if self.kind not in PROCESS_KINDS:
            raise SpecError("unknown process kind %r" % self.kind)
        if self.kind == "polya":
            if self.alpha is None or self.beta is None:
                raise SpecError("polya needs alpha and beta")
            if self.alpha <= 0 or self.beta <= 0:
                raise SpecError("alpha and beta must be positive")
        if self.kind == "constant_atom":
            if self.atom is None or not 0 <= self.atom <= 1:
                raise SpecError("constant_atom needs an atom in [0, 1]")
        if self.kind == "iid_bernoulli_mixture":
            _check_mixture(self.mixture)

    @property
    def binary(self) -> bool:
        return self.kind in BINARY_KINDS


def _check_mixture(table):
    if not table:
        raise SpecError("mixture table is empty")
    if any(w <= 0 for w, _ in table):
        raise SpecError("mixture weights must be positive")
    if any(not 0 <= p <= 1 for _, p in table):
        raise SpecError("mixture coin weights must lie in [0, 1]")
    if sum(w for w, _ in table) != 1:
        raise SpecError("mixture weights must sum to exactly 1")


@dataclass(frozen=True)
class MeasureSpec:
    kind: str
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    atom: Optional[Fraction] = None
    mixture: Tuple[Tuple[Fraction, Fraction], ...] = ()
    process: Optional[ProcessSpec] = None

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise SpecError("unknown measure kind %r" % self.kind)
        if self.kind == "beta_bernoulli":
            if self.alpha is None or self.beta is None or self.alpha <= 0 or self.beta <= 0:
                raise SpecError("beta_bernoulli needs positive alpha and beta")
        if self.kind == "dirac_at_atom" and (self.atom is None or not 0 <= self.atom <= 1):
            raise SpecError("dirac_at_atom needs an atom in [0, 1]")
        if self.kind == "bernoulli_mixture":
            _check_mixture(self.mixture)
        if self.kind == "definetti_oracle" and self.process is None:
            raise SpecError("definetti_oracle needs a process")


# Polya urn marginals

class _RisingFactorials:
    """Memoized ``prod_{i<n} (a + i)`` for a fixed rational ``a``."""

    def __init__(self, a: Fraction):
        self.a = a
        self.values = [ONE]
        self.lock = threading.Lock()

    def __getitem__(self, n: int) -> Fraction:
        with self.lock:
            vals = self.values
            while len(vals) <= n:
                vals.append(vals[-1] * (self.a + len(vals) - 1))
            return vals[n]


_RISING: Dict[Fraction, _RisingFactorials] = {}


def rising(a: Fraction, n: int) -> Fraction:
    table = _RISING.get(a)
    if table is None:
        table = _RISING.setdefault(a, _RisingFactorials(a))
    return table[n]


def polya_counts(alpha, beta, ones: int, zeros: int) -> Fraction:
    """Probability of a particular binary pattern with the given counts.

    Gamma ratios are rising factorials: Gamma(a + n) / Gamma(a) = prod (a + i).
    """
    alpha, beta = as_rational(alpha), as_rational(beta)
    return rising(alpha, ones) * rising(beta, zeros) / rising(alpha + beta, ones + zeros)


def _pattern_bits(pattern) -> List[int]:
    bits = [int(c) for c in pattern]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("pattern must be binary: %r" % (pattern,))
    return bits


def polya_marginal(alpha, beta, pattern) -> Fraction:
    bits = _pattern_bits(pattern)
    s = sum(bits)
    return polya_counts(alpha, beta, s, len(bits) - s)


def polya_sequential(alpha, beta, pattern) -> Fraction:
    """Same probability, by running the urn's one-step conditionals."""
    alpha, beta = as_rational(alpha), as_rational(beta)
    prob = ONE
    red = alpha
    total = alpha + beta
    for x in _pattern_bits(pattern):
        prob *= (red / total) if x else ((total - red) / total)
        red += x
        total += 1
    return prob


# marginal oracles

def _binary_flags(s: OpenIntervalSet, closed: bool):
    if closed:
        return s.closure_contains(0), s.closure_contains(1)
    return s.contains(0), s.contains(1)


class _ExactOracle(MarginalOracle):
    exact = True

    def box_lower(self, sigma, fuel: int) -> Fraction:
        return self.event_prob(make_event(list(sigma)))


class BinaryOracle(_ExactOracle):
    """Exact oracle for a binary exchangeable sequence given by ``Pr(ones, zeros)``."""

    def __init__(self, counts_prob, spec: Optional[ProcessSpec] = None):
        self._counts_prob = counts_prob
        self.spec = spec

    def profile(self, sigma, closed):
        return tuple(_binary_flags(s, closed) for s in sigma)

    def event_prob(self, event) -> Fraction:
        ones = zeros = 0
        for s, m, closed in event:
            has0, has1 = _binary_flags(s, closed)
            if has0 and has1:
                continue
            if not (has0 or has1):
                return ZERO
            if has1:
                ones += m
            else:
                zeros += m
        return self._counts_prob(ones, zeros)

    def pattern_prob(self, pattern) -> Fraction:
        bits = _pattern_bits(pattern)
        s = sum(bits)
        return self._counts_prob(s, len(bits) - s)


class IIDUniformOracle(_ExactOracle):
    def profile(self, sigma, closed):
        return tuple(s.length() for s in sigma)

    def event_prob(self, event) -> Fraction:
        out = ONE
        for s, m, _ in event:
            out *= s.length() ** m
        return out


class ConstantUniformOracle(_ExactOracle):
    def event_prob(self, event) -> Fraction:
        common = OpenIntervalSet.full()
        for s, _, _ in event:
            common = common.intersection(s)
        return common.length()


class ConstantAtomOracle(_ExactOracle):
    def __init__(self, atom: Fraction):
        self.atom = atom

    def profile(self, sigma, closed):
        if closed:
            return tuple(s.closure_contains(self.atom) for s in sigma)
        return tuple(s.contains(self.atom) for s in sigma)

    def event_prob(self, event) -> Fraction:
        for s, _, closed in event:
            inside = s.closure_contains(self.atom) if closed else s.contains(self.atom)
            if not inside:
                return ZERO
        return ONE


def mixture_counts(table):
    def prob(ones: int, zeros: int) -> Fraction:
        return sum((w * p ** ones * (1 - p) ** zeros for w, p in table), ZERO)
    return prob


def as_marginal_oracle(spec: ProcessSpec) -> MarginalOracle:
    if spec.kind == "polya":
        a, b = spec.alpha, spec.beta
        return BinaryOracle(lambda ones, zeros: polya_counts(a, b, ones, zeros), spec)
    if spec.kind == "iid_bernoulli_mixture":
        return BinaryOracle(mixture_counts(spec.mixture), spec)
    if spec.kind == "iid_uniform":
        return IIDUniformOracle()
    if spec.kind == "constant_uniform":
        return ConstantUniformOracle()
    if spec.kind == "constant_atom":
        return ConstantAtomOracle(spec.atom)
    raise SpecError("no oracle for %r" % spec.kind)


# de Finetti measure oracles

def beta_cdf(alpha: int, beta: int, x: Fraction) -> Fraction:
    """``Pr(theta <= x)`` for integer Beta parameters (binomial tail identity)."""
    x = min(ONE, max(ZERO, as_rational(x)))
    n = alpha + beta - 1
    return sum((math.comb(n, j) * x ** j * (1 - x) ** (n - j) for j in range(alpha, n + 1)), ZERO)


def _coin_role(tau: OpenIntervalSet) -> str:
    has0, has1 = tau.contains(0), tau.contains(1)
    if has0 and has1:
        return "one"
    if has1:
        return "theta"
    if has0:
        return "flip"
    return "zero"


def _coin_value(role: str, theta: Fraction) -> Fraction:
    return {"one": ONE, "zero": ZERO, "theta": theta, "flip": 1 - theta}[role]


def _theta_region(C, labels) -> OpenIntervalSet:
    """The set of coin weights theta for which the up-set event holds."""
    roles = [_coin_role(t) for t in labels]
    pieces = []
    for row in C:
        lo, hi = Fraction(-1), Fraction(2)
        ok = True
        for role, c in zip(roles, row):
            if c == ALWAYS:
                continue
            if role == "theta":
                lo = max(lo, c)
            elif role == "flip":
                hi = min(hi, 1 - c)
            elif not _coin_value(role, ZERO) > c:
                ok = False
        if ok and lo < hi:
            pieces.append((lo, hi))
    return normalize(pieces)


class BetaBernoulliMeasure(RightOrderOracle):
    """``V_tau = theta [1 in tau] + (1 - theta) [0 in tau]`` with theta ~ Beta(a, b).

    Integer parameters use the exact CDF.  Other rational parameters price
    the event through the moments ``E theta^e``, which are the Polya urn
    marginals ``Pr(1^e)``; that route only gives lower bounds.
    """

    def __init__(self, alpha, beta):
        self.alpha = as_rational(alpha)
        self.beta = as_rational(beta)
        self.exact = self.alpha.denominator == 1 and self.beta.denominator == 1
        self._moments = None

    def upset_lower(self, C, labels, fuel: int) -> Fraction:
        region = _theta_region(C, labels)
        if region.is_empty():
            return ZERO
        if self.exact:
            a, b = int(self.alpha), int(self.beta)
            return sum((beta_cdf(a, b, min(hi, ONE)) - beta_cdf(a, b, max(lo, ZERO))
                        for lo, hi in region), ZERO)
        from .moments import MomentOracle, dist_from_moments
        if self._moments is None:
            def exact(e, _fuel):
                return polya_counts(self.alpha, self.beta, e[0], 0)
            self._moments = MomentOracle(1, exact, exact, exact=True, name="beta")
        return dist_from_moments(self._moments, (region,), fuel)


class _DeterministicMeasure(RightOrderOracle):
    """The directing measure is a fixed measure; V_tau is a constant."""

    exact = True

    def value(self, tau: OpenIntervalSet) -> Fraction:
        raise NotImplementedError

    def upset_lower(self, C, labels, fuel: int) -> Fraction:
        vals = [self.value(t) for t in labels]
        for row in C:
            if all(c == ALWAYS or v > c for v, c in zip(vals, row)):
                return ONE
        return ZERO


class DiracAtUniform(_DeterministicMeasure):
    def value(self, tau):
        return tau.length()


class DiracAtAtom(_DeterministicMeasure):
    def __init__(self, atom: Fraction):
        self.atom = atom

    def value(self, tau):
        return ONE if tau.contains(self.atom) else ZERO


class UniformOnDiracs(RightOrderOracle):
    """``nu = delta_p`` with p uniform, so ``V_tau = 1[p in tau]``."""

    exact = True

    def upset_lower(self, C, labels, fuel: int) -> Fraction:
        region = OpenIntervalSet.empty()
        for row in C:
            part = OpenIntervalSet.full()
            for tau, c in zip(labels, row):
                if c != ALWAYS:
                    part = part.intersection(tau)
            region = region.union(part)
        return region.length()


class BernoulliMixtureMeasure(RightOrderOracle):
    exact = True

    def __init__(self, table):
        self.table = tuple(table)

    def upset_lower(self, C, labels, fuel: int) -> Fraction:
        roles = [_coin_role(t) for t in labels]
        total = ZERO
        for w, p in self.table:
            vals = [_coin_value(r, p) for r in roles]
            if any(all(c == ALWAYS or v > c for v, c in zip(vals, row)) for row in C):
                total += w
        return total


class TransformBackedMeasure(RightOrderOracle):
    """De Finetti measure of a process, enumerated from its marginals."""

    def __init__(self, process: ProcessSpec):
        self.process = process
        self.chi = as_marginal_oracle(process)

    def upset_lower(self, C, labels, fuel: int) -> Fraction:
        from .core import DeFinettiQuery, definetti_lower
        return definetti_lower(self.chi, DeFinettiQuery(labels, C), fuel)


def as_mu_oracle(spec: MeasureSpec, allow_moments: bool = False) -> RightOrderOracle:
    """Exact right-order oracle for a closed-form measure.

    ``allow_moments`` admits non-integer Beta parameters through the
    moment route instead of rejecting them.
    """
    if spec.kind == "beta_bernoulli":
        if not allow_moments and (spec.alpha.denominator != 1 or spec.beta.denominator != 1):
            raise SpecError("closed-form Beta oracle needs integer parameters; "
                            "use a definetti_oracle measure backed by the polya process")
        return BetaBernoulliMeasure(spec.alpha, spec.beta)
    if spec.kind == "dirac_at_uniform":
        return DiracAtUniform()
    if spec.kind == "uniform_on_diracs":
        return UniformOnDiracs()
    if spec.kind == "dirac_at_atom":
        return DiracAtAtom(spec.atom)
    if spec.kind == "bernoulli_mixture":
        return BernoulliMixtureMeasure(spec.mixture)
    if spec.kind == "definetti_oracle":
        return TransformBackedMeasure(spec.process)
    raise SpecError("no oracle for %r" % spec.kind)


# sampling (statistical cross-checks only; never feeds certified bounds)

def make_rng(seed: int) -> np.random.Generator:
    """Philox4x64 counter-based generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & (2 ** 64 - 1)))


@dataclass
class SamplerState:
    process: ProcessSpec
    seed: int
    history: List = field(default_factory=list)
    red: Optional[Fraction] = None
    total: Optional[Fraction] = None
    latent: Optional[object] = None

    def __post_init__(self):
        self.rng = make_rng(self.seed)
        if self.process.kind == "polya":
            self.red = self.process.alpha
            self.total = self.process.alpha + self.process.beta


def sample_sequence(state: SamplerState, n: int) -> List:
    """Extend the state's history by ``n`` draws and return the new draws."""
    if n < 1:
        raise ValueError("n must be >= 1")
    spec = state.process
    rng = state.rng
    out = []
    for _ in range(n):
        if spec.kind == "polya":
            x = 1 if Fraction(rng.random()) < state.red / state.total else 0
            state.red += x
            state.total += 1
        elif spec.kind == "iid_uniform":
            x = float(rng.random())
        elif spec.kind == "constant_uniform":
            if state.latent is None:
                state.latent = float(rng.random())
            x = state.latent
        elif spec.kind == "constant_atom":
            x = spec.atom
        else:
            if state.latent is None:
                weights = [float(w) for w, _ in spec.mixture]
                state.latent = spec.mixture[int(rng.choice(len(weights), p=weights))][1]
            x = 1 if Fraction(rng.random()) < state.latent else 0
        out.append(x)
    state.history.extend(out)
    return out


def directing_sampler(spec: MeasureSpec, seed: int):
    """Draw the directing measure once and return a zero-argument sampler.

    This is the mutation-free form: the returned procedure shares one drawn
    weight and keeps no sufficient statistics.
    """
    rng = make_rng(seed)
    if spec.kind == "beta_bernoulli":
        weight = rng.beta(float(spec.alpha), float(spec.beta))
        return lambda: 1 if rng.random() < weight else 0
    if spec.kind == "bernoulli_mixture":
        weights = [float(w) for w, _ in spec.mixture]
        p = float(spec.mixture[int(rng.choice(len(weights), p=weights))][1])
        return lambda: 1 if rng.random() < p else 0
    if spec.kind == "dirac_at_uniform":
        return lambda: float(rng.random())
    if spec.kind == "uniform_on_diracs":
        p = float(rng.random())
        return lambda: p
    if spec.kind == "dirac_at_atom":
        return lambda: spec.atom
    raise SpecError("no closed-form sampler for %r" % spec.kind)


# recognizing the Beta-Bernoulli representation

@dataclass
class Recognition:
    measure: Optional[MeasureSpec]
    verified_depth: int
    rejected: List[str] = field(default_factory=list)


def _patterns(depth: int):
    for n in range(1, depth + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


def _verify(oracle: BinaryOracle, expected, depth: int) -> Optional[str]:
    for pat in _patterns(depth):
        if oracle.pattern_prob(pat) != expected(pat):
            return pat
    return None


def recognize_beta_bernoulli(oracle: BinaryOracle, depth: int = 8) -> Recognition:
    """Match an exact binary oracle against Beta-Bernoulli, then i.i.d. coins.

    The Beta parameters are solved from ``Pr(1)`` and ``Pr(11)``; every
    pattern up to ``depth`` is then checked by exact equality.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    p1 = oracle.pattern_prob("1")
    p11 = oracle.pattern_prob("11")
    notes = []
    if p1 in (ZERO, ONE):
        spec = MeasureSpec("bernoulli_mixture", mixture=((ONE, p1),))
        bad = _verify(oracle, lambda pat: p1 ** pat.count("1") * (1 - p1) ** pat.count("0"), depth)
        if bad is None:
            return Recognition(spec, depth, notes)
        return Recognition(None, 0, ["degenerate coin fails at pattern %s" % bad])
    ratio = p11 / p1
    if ratio > p1:
        s = (1 - ratio) / (ratio - p1)
        alpha, beta = p1 * s, (1 - p1) * s
        bad = _verify(oracle, lambda pat: polya_marginal(alpha, beta, pat), depth)
        if bad is None:
            return Recognition(MeasureSpec("beta_bernoulli", alpha=alpha, beta=beta), depth, notes)
        notes.append("beta_bernoulli(%s, %s) fails at pattern %s" % (alpha, beta, bad))
    else:
        notes.append("beta_bernoulli fit impossible at pattern 11 (Pr(11) = %s)" % p11)
    bad = _verify(oracle, lambda pat: p1 ** pat.count("1") * (1 - p1) ** pat.count("0"), depth)
    if bad is None:
        return Recognition(MeasureSpec("bernoulli_mixture", mixture=((ONE, p1),)), depth, notes)
    notes.append("i.i.d. Bernoulli(%s) fails at pattern %s" % (p1, bad))
    return Recognition(None, 0, notes)
