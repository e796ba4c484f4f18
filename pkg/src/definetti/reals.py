"""Lower, upper and two-sided reals as fuel-indexed rational bound streams."""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .intervals import as_rational


class _Stream:
    _monotone_sign = 0

    def __init__(self, fn: Callable[[int], Fraction], *, enforce_monotone: bool = False):
        self._fn = fn
        self._enforce = enforce_monotone
        self._memo: dict = {}
        self._lock = threading.Lock()

    def _raw(self, fuel: int) -> Fraction:
        with self._lock:
            hit = self._memo.get(fuel)
        if hit is not None:
            return hit
        value = Fraction(self._fn(fuel))
        with self._lock:
            self._memo[fuel] = value
        return value

    def bound_at(self, fuel: int) -> Fraction:
        if fuel < 1:
            raise ValueError("fuel must be a positive integer")
        if not self._enforce:
            return self._raw(fuel)
        # running extremum over all fuels <= fuel
        best = None
        for n in range(1, fuel + 1):
            v = self._raw(n)
            if best is None or (v - best) * self._monotone_sign > 0:
                best = v
        return best

    def __call__(self, fuel: int) -> Fraction:
        return self.bound_at(fuel)

    def column(self, fuels: Sequence[int]):
        return [self.bound_at(n) for n in fuels]


class LowerReal(_Stream):
    """A c.e. real: nondecreasing rational lower bounds."""

    _monotone_sign = 1

    @classmethod
    def exact(cls, value) -> "LowerReal":
        q = as_rational(value)
        return cls(lambda n: q)

    @classmethod
    def running_max(cls, fn: Callable[[int], Fraction]) -> "LowerReal":
        """Wrap a sound but possibly non-monotone bound function."""
        return cls(fn, enforce_monotone=True)


class UpperReal(_Stream):
    """A co-c.e. real: nonincreasing rational upper bounds."""

    _monotone_sign = -1

    @classmethod
    def exact(cls, value) -> "UpperReal":
        q = as_rational(value)
        return cls(lambda n: q)

    @classmethod
    def running_min(cls, fn: Callable[[int], Fraction]) -> "UpperReal":
        return cls(fn, enforce_monotone=True)


class BracketReal:
    """A computable real given by a lower and an upper stream."""

    def __init__(self, lower: LowerReal, upper: UpperReal):
        self.lower = lower
        self.upper = upper

    @classmethod
    def exact(cls, value) -> "BracketReal":
        return cls(LowerReal.exact(value), UpperReal.exact(value))

    def bounds_at(self, fuel: int):
        return self.lower.bound_at(fuel), self.upper.bound_at(fuel)

    def width_at(self, fuel: int) -> Fraction:
        lo, hi = self.bounds_at(fuel)
        return hi - lo


def lower_sup(family) -> LowerReal:
    """Supremum of an enumerated family of lower reals.

    ``family`` is a finite sequence or a callable ``i -> LowerReal`` indexed
    from 1.  At fuel N the first N members are consulted, each at fuel N.
    """
    if callable(family) and not isinstance(family, (list, tuple)):
        def member(i: int) -> Optional[LowerReal]:
            return family(i)
        size = None
    else:
        items = list(family)

        def member(i: int) -> Optional[LowerReal]:
            return items[i - 1] if i <= len(items) else None
        size = len(items)

    def bound(n: int) -> Fraction:
        top = n if size is None else min(n, size)
        values = [member(i).bound_at(n) for i in range(1, top + 1)]
        if not values:
            raise ValueError("empty family has no supremum")
        return max(values)

    return LowerReal(bound)


def signed_sum(coeffs: Sequence, lowers: Sequence[LowerReal], uppers: Sequence[UpperReal]) -> LowerReal:
    """Lower bound of ``sum c_i * r_i``.

    Positive coefficients consume ``lowers`` in order, negative ones consume
    ``uppers`` in order; zero coefficients consume nothing.
    """
    coeffs = [as_rational(c) for c in coeffs]
    n_pos = sum(1 for c in coeffs if c > 0)
    n_neg = sum(1 for c in coeffs if c < 0)
    if n_pos != len(lowers) or n_neg != len(uppers):
        raise ValueError(
            "sign pairing mismatch: %d positive coefficients for %d lower streams, "
            "%d negative for %d upper streams" % (n_pos, len(lowers), n_neg, len(uppers)))
    pos = [c for c in coeffs if c > 0]
    neg = [c for c in coeffs if c < 0]

    def bound(n: int) -> Fraction:
        total = Fraction(0)
        for c, s in zip(pos, lowers):
            total += c * s.bound_at(n)
        for c, s in zip(neg, uppers):
            total += c * s.bound_at(n)
        return total

    return LowerReal(bound)


def upper_from_complement(total, lower_of_complement: LowerReal) -> UpperReal:
    total = as_rational(total)
    return UpperReal(lambda n: total - lower_of_complement.bound_at(n))
