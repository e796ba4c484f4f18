"""De Finetti measure from the sequence distribution, and back.

``definetti_lower`` enumerates lower bounds on

    Pr(exists i: forall j: V_{pi_j} > C[i][j])

by pricing lower-approximating polynomials of the up-set at the vector
``V_sigma`` for refinements ``sigma`` of ``pi``.  Positive monomials are
priced with open-set moment lower bounds, negative ones with closure
moment upper bounds; the pair ``(n, sigma)`` is swept jointly under fuel.
"""

from __future__ import annotations

import itertools
import threading
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .intervals import HIGH, LOW, OpenIntervalSet, SetTuple, enumerate_refinements
from .moments import chi_moments, dist_from_moments
from .oracles import (ALWAYS, ConstraintMatrix, MarginalOracle, RightOrderOracle,
                      _closed_upper_event, _event_lower, constraint_matrix, make_event,
                      query_upset, reduce_upset)
from .polynomials import indicator_poly_for_constraints, priced

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class DeFinettiQuery:
    pi: SetTuple
    C: ConstraintMatrix

    def __post_init__(self):
        object.__setattr__(self, "pi", tuple(self.pi))
        object.__setattr__(self, "C", constraint_matrix(self.C))
        if len(self.pi) != len(self.C[0]):
            raise ValueError("arity mismatch: %d sets, %d constraint columns"
                             % (len(self.pi), len(self.C[0])))


@dataclass(frozen=True)
class ContinuityAssumption:
    """Caller's assertion that the directing random measure is a.s. continuous."""

    flag: bool = False


class _ChiCache:
    """Moment bounds and polynomial prices for one marginal oracle."""

    def __init__(self, chi: MarginalOracle):
        self.chi = chi
        self.lock = threading.Lock()
        self.moments: Dict[tuple, Fraction] = {}
        self.prices: Dict[tuple, Fraction] = {}
        self.results: Dict[tuple, Fraction] = {}

    def moment(self, closed: bool, sigma: SetTuple, e: Tuple[int, ...], fuel: int) -> Fraction:
        key = (closed, sigma, e, None if self.chi.exact else fuel)
        with self.lock:
            hit = self.moments.get(key)
        if hit is not None:
            return hit
        if not any(e):
            value = ONE
        elif closed:
            value = _closed_upper_event(self.chi, list(sigma), e, fuel)
        else:
            value = _event_lower(self.chi, make_event(list(sigma), e), fuel)
        with self.lock:
            self.moments[key] = value
        return value


_CACHES: "weakref.WeakKeyDictionary[MarginalOracle, _ChiCache]" = weakref.WeakKeyDictionary()
_CACHES_LOCK = threading.Lock()


def _cache_for(chi: MarginalOracle) -> _ChiCache:
    with _CACHES_LOCK:
        c = _CACHES.get(chi)
        if c is None:
            c = _CACHES[chi] = _ChiCache(chi)
        return c


def _active_columns(C) -> List[int]:
    return [j for j in range(len(C[0])) if any(row[j] != ALWAYS for row in C)]


def _q_price(cache: _ChiCache, n: int, C, sigma: SetTuple, fuel: int) -> Fraction:
    """Lower bound on ``E q_{n,C}(V_sigma, V_closure(sigma))``."""
    chi = cache.chi
    if chi.exact:
        key = (n, C, chi.profile(sigma, False), chi.profile(sigma, True))
    else:
        key = (n, C, sigma, fuel)
    with cache.lock:
        hit = cache.prices.get(key)
    if hit is not None:
        return hit
    poly = indicator_poly_for_constraints(n, C).polynomial
    total = priced(poly, lambda e, positive: cache.moment(not positive, sigma, e, fuel))
    with cache.lock:
        cache.prices[key] = total
    return total


def definetti_lower(chi: MarginalOracle, query: DeFinettiQuery, fuel: int) -> Fraction:
    """Sound lower bound, nondecreasing in fuel, on the queried up-set probability."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    reduced = reduce_upset(query.pi, query.C)
    if reduced is True:
        return ONE
    if reduced is False:
        return ZERO
    cols = _active_columns(reduced)
    pi = tuple(query.pi[j] for j in cols)
    C = tuple(tuple(row[j] for j in cols) for row in reduced)
    cache = _cache_for(chi)
    rkey = (pi, C)
    best = ZERO
    with cache.lock:
        # earlier fuels were computed with a subset of the (n, sigma) pairs
        for (k, f), v in cache.results.items():
            if k == rkey and f <= fuel:
                best = max(best, v)
    sigmas = enumerate_refinements(pi, fuel)
    for n in range(2, fuel + 1):
        for sigma in sigmas:
            best = max(best, _q_price(cache, n, C, sigma, fuel))
    best = min(ONE, best)
    with cache.lock:
        cache.results[(rkey, fuel)] = best
    return best


def _downset_rows(C) -> List[Tuple[OpenIntervalSet, ...]]:
    """Boxes whose union is the open down-set ``cap_i cup_j {x_j < C[i][j]}``."""
    k = len(C[0])
    options = [[j for j, c in enumerate(row) if c != ALWAYS] for row in C]
    boxes = set()
    for choice in itertools.product(*options):
        caps = [None] * k
        for row, j in zip(C, choice):
            caps[j] = row[j] if caps[j] is None else min(caps[j], row[j])
        box = tuple(OpenIntervalSet.full() if c is None else OpenIntervalSet(((LOW, c),))
                    for c in caps)
        if not any(s.is_empty() for s in box):
            boxes.add(box)
    return sorted(boxes, key=lambda b: [s.intervals for s in b])


def definetti_bracket(chi: MarginalOracle, query: DeFinettiQuery,
                      assume: ContinuityAssumption, fuel: int) -> Tuple[Fraction, Fraction]:
    """Two-sided bounds, licensed by the caller's continuity assertion.

    The upper bound is one minus a moment-based lower bound on the
    complementary down-set of ``(V_{pi_1}, ..., V_{pi_k})``.
    """
    if not assume.flag:
        raise ValueError("two-sided bounds need an explicit continuity assertion")
    lower = definetti_lower(chi, query, fuel)
    reduced = reduce_upset(query.pi, query.C)
    if reduced is True or reduced is False:
        return lower, lower
    cols = _active_columns(reduced)
    C = tuple(tuple(row[j] for j in cols) for row in reduced)
    rows = _downset_rows(C)
    if not rows:
        return lower, ONE
    oracle = chi_moments(chi, [query.pi[j] for j in cols])
    upper = ONE - dist_from_moments(oracle, rows, fuel)
    return lower, max(lower, upper)


# forward direction

def _threshold_rows(t: Fraction, k: int, fuel: int) -> List[Tuple[Fraction, ...]]:
    """Grid points ``c`` (mesh 1/fuel) with ``prod c >= t``, minimal in the last coordinate."""
    grid = [Fraction(j, fuel) for j in range(1, fuel)]
    rows = []
    for head in itertools.product(grid, repeat=k - 1):
        prod = ONE
        for c in head:
            prod *= c
        need = t / prod
        if need >= 1:
            continue
        j = -(-(need.numerator * fuel) // need.denominator)  # ceil(need * fuel)
        last = Fraction(j, fuel)
        if last < 1:
            rows.append(head + (last,))
    return rows


def _layer_cake(mu: RightOrderOracle, sigma: SetTuple, fuel: int) -> Fraction:
    k = len(sigma)
    total = ZERO
    for j in range(1, fuel):
        t = Fraction(j, fuel)
        rows = _threshold_rows(t, k, fuel)
        if not rows:
            break
        total += query_upset(mu, sigma, rows, fuel) / fuel
    return total


def chi_from_mu(mu: RightOrderOracle, sigma: Sequence[OpenIntervalSet], fuel: int) -> Fraction:
    """Lower bound on ``Pr(X_i in sigma_i for all i) = E prod V_{sigma_i}``.

    Layer cake: ``E Y = int_0^1 Pr(Y > t) dt`` is bounded below by a lower
    Riemann sum whose terms come from threshold boxes inside ``{prod x > t}``.
    The level grids are not nested, so the best sum over mesh sizes
    ``1/d, d <= fuel`` is returned.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    sigma = tuple(sigma)
    if not sigma:
        raise ValueError("need at least one coordinate")
    if any(s.is_empty() for s in sigma):
        return ZERO
    live = tuple(s for s in sigma if not s.is_full())
    if not live:
        return ONE
    best = ZERO
    for d in range(2, fuel + 1):
        best = max(best, _layer_cake(mu, live, d))
    return min(ONE, best)
