"""Mixed moments from a sequence oracle, and distributions from moments."""

from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

from .intervals import HIGH, LOW, OpenIntervalSet, as_rational
from .oracles import (MarginalOracle, _closed_upper_event, _event_lower, algebra_lower,
                      closed_upper, make_event)
from .polynomials import Polynomial, indicator_approx, priced

ZERO = Fraction(0)
ONE = Fraction(1)

MomentFn = Callable[[Tuple[int, ...], int], Fraction]


def moments_from_chi(oracle: MarginalOracle, labels: Sequence[OpenIntervalSet],
                     exponents: Sequence[int], fuel: int) -> Tuple[Fraction, Fraction]:
    """Bounds on ``E prod V_{labels[i]} ** exponents[i]``.

    By exchangeability the moment is the probability that the first
    ``sum(exponents)`` draws land in the repeated labels.  Exponent 0 drops
    the coordinate.
    """
    if len(labels) != len(exponents):
        raise ValueError("labels and exponents differ in length")
    if any(e < 0 for e in exponents):
        raise ValueError("exponents must be nonnegative")
    lo = _event_lower(oracle, make_event(list(labels), exponents), fuel)
    hi = _closed_upper_event(oracle, list(labels), exponents, fuel)
    return lo, hi


class MomentOracle:
    """Mixed moments ``E prod x_j ** e_j`` of a random vector in [0, 1]^k.

    ``lower`` is required; ``upper`` may be None when only lower bounds are
    enumerable.  ``exact`` marks oracles whose bounds ignore fuel.
    """

    def __init__(self, arity: int, lower: MomentFn, upper: Optional[MomentFn] = None,
                 exact: bool = False, name: str = "moments"):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.arity = arity
        self._lower = lower
        self._upper = upper
        self.exact = exact
        self.name = name
        self._memo: Dict[tuple, Fraction] = {}
        self._lock = threading.Lock()

    @property
    def has_upper(self) -> bool:
        return self._upper is not None

    def _cached(self, kind: str, fn: MomentFn, e: Tuple[int, ...], fuel: int) -> Fraction:
        key = (kind, e, None if self.exact else fuel)
        with self._lock:
            hit = self._memo.get(key)
        if hit is None:
            if not any(e):
                hit = ONE
            else:
                hit = min(ONE, max(ZERO, Fraction(fn(e, fuel))))
            with self._lock:
                self._memo[key] = hit
        return hit

    def moment_lower(self, e: Sequence[int], fuel: int) -> Fraction:
        return self._cached("lo", self._lower, tuple(e), fuel)

    def moment_upper(self, e: Sequence[int], fuel: int) -> Fraction:
        if self._upper is None:
            return ONE
        return self._cached("hi", self._upper, tuple(e), fuel)

    def __repr__(self):
        return "MomentOracle(%s, k=%d)" % (self.name, self.arity)


def uniform_moments(arity: int = 1) -> MomentOracle:
    """Independent uniform coordinates: ``E x^e = 1 / (e + 1)``."""
    def exact(e, fuel):
        out = ONE
        for ej in e:
            out /= ej + 1
        return out
    return MomentOracle(arity, exact, exact, exact=True, name="uniform")


def point_mass_moments(point: Sequence) -> MomentOracle:
    point = [as_rational(p) for p in point]
    if any(not 0 <= p <= 1 for p in point):
        raise ValueError("point must lie in [0, 1]^k")

    def exact(e, fuel):
        out = ONE
        for p, ej in zip(point, e):
            out *= p ** ej
        return out
    return MomentOracle(len(point), exact, exact, exact=True, name="point mass")


def chi_moments(oracle: MarginalOracle, labels: Sequence[OpenIntervalSet],
                two_sided: bool = True) -> MomentOracle:
    """Joint moments of ``(V_{labels[0]}, ..., V_{labels[k-1]})`` from the sequence."""
    labels = tuple(labels)

    def lower(e, fuel):
        return _event_lower(oracle, make_event(list(labels), e), fuel)

    def upper(e, fuel):
        return _closed_upper_event(oracle, list(labels), e, fuel)

    return MomentOracle(len(labels), lower, upper if two_sided else None,
                        exact=oracle.exact, name="chi")


def _as_rows(sigma) -> Tuple[Tuple[OpenIntervalSet, ...], ...]:
    """Accept a single product (SetTuple) or a union of products."""
    sigma = tuple(sigma)
    if sigma and isinstance(sigma[0], OpenIntervalSet):
        return (sigma,)
    return tuple(tuple(r) for r in sigma)


def price(poly: Polynomial, oracle: MomentOracle, fuel: int) -> Tuple[Fraction, bool]:
    """Sound lower bound on ``E poly(x)`` and whether a trivial upper bound was used."""
    slack = not oracle.has_upper and any(c < 0 and any(e) for e, c in poly.terms.items())

    def value(e, positive):
        return oracle.moment_lower(e, fuel) if positive else oracle.moment_upper(e, fuel)

    return priced(poly, value), slack


def dist_from_moments(oracle: MomentOracle, sigma, fuel: int, report: bool = False):
    """Lower bound on ``Pr(x in sigma)`` from mixed moments.

    ``sigma`` is a product of algebra sets or a union of such products.
    The bound is the best price of the lower-approximating polynomials
    ``p_n`` for ``n <= fuel``, clamped to [0, 1].  With ``report=True`` the
    result is ``(bound, slack)`` where ``slack`` says some negative
    coefficient was priced by the trivial upper bound 1.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    rows = _as_rows(sigma)
    if any(len(r) != oracle.arity for r in rows):
        raise ValueError("set arity does not match the moment oracle")
    best = ZERO
    slack = False
    for n in range(2, fuel + 1):
        value, used = price(indicator_approx(n, rows).polynomial, oracle, fuel)
        slack = slack or used
        best = max(best, value)
    best = min(ONE, best)
    return (best, slack) if report else best


def _cells(fuel: int):
    grid = [Fraction(j, fuel) for j in range(fuel + 1)]
    return list(zip(grid[:-1], grid[1:]))


def _open_cell(a: Fraction, b: Fraction) -> OpenIntervalSet:
    return OpenIntervalSet(((LOW if a == 0 else a, HIGH if b == 1 else b),))


def integrate_continuous(oracle: MarginalOracle, exponents: Sequence[int], fuel: int):
    """Darboux bracket on ``E prod X_j ** e_j``.

    Grids of mesh ``1/d`` for ``d <= fuel`` are not nested, so the best
    bracket seen so far is kept.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    exps = list(exponents)
    if not any(exps):
        return ONE, ONE
    lower, upper = ZERO, ONE
    for d in range(1, fuel + 1):
        lo, hi = _darboux(oracle, exps, d)
        lower, upper = max(lower, lo), min(upper, hi)
    return lower, upper


def _darboux(oracle: MarginalOracle, exps, fuel: int):
    """Sums over the mesh-``1/fuel`` grid.

    The lower sum prices open cells from below (grid lines are dropped,
    harmless for a nonnegative integrand); the upper sum prices closed
    cells from above.
    """
    active = [j for j, e in enumerate(exps) if e]
    cells = _cells(fuel)
    lower = ZERO
    upper = ZERO
    for combo in itertools.product(cells, repeat=len(active)):
        inf = ONE
        sup = ONE
        for (a, b), j in zip(combo, active):
            inf *= a ** exps[j]
            sup *= b ** exps[j]
        coords = [_open_cell(a, b) for a, b in combo]
        if inf:
            lower += inf * algebra_lower(oracle, tuple(coords), fuel)
        upper += sup * closed_upper(oracle, tuple(coords), fuel)
    return lower, min(ONE, upper)
