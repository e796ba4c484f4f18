"""Finite unions of open rational intervals, relative to the domain [0, 1].

Sets are stored in a canonical form: components are sorted, pairwise
disjoint, and any endpoint lying outside the domain is replaced by the
sentinel ``-1`` (below) or ``2`` (above).  Two sets denoting the same
subset of [0, 1] therefore compare equal.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

RationalLike = Union[int, str, Fraction]

LOW = Fraction(-1)
HIGH = Fraction(2)
ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: RationalLike) -> Fraction:
    """Convert ints, ``"p/q"`` strings and Fractions to Fraction.

    Floats are rejected: certified data never passes through them.
    """
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals: %r" % value)
    return Fraction(value)


@dataclass(frozen=True)
class OpenIntervalSet:
    intervals: Tuple[Tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        canon = _canonical(self.intervals)
        object.__setattr__(self, "intervals", canon)
        object.__setattr__(self, "_hash", hash(canon))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpenIntervalSet):
            return NotImplemented
        return self._hash == other._hash and self.intervals == other.intervals

    # constructors
    @classmethod
    def of(cls, *pairs) -> "OpenIntervalSet":
        return cls(tuple((as_rational(a), as_rational(b)) for a, b in pairs))

    @classmethod
    def full(cls) -> "OpenIntervalSet":
        return cls(((LOW, HIGH),))

    @classmethod
    def empty(cls) -> "OpenIntervalSet":
        return cls(())

    # predicates
    def is_empty(self) -> bool:
        return not self.intervals

    def is_full(self) -> bool:
        return self.intervals == ((LOW, HIGH),)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def contains(self, x: RationalLike) -> bool:
        x = as_rational(x)
        if x < 0 or x > 1:
            return False
        return any(a < x < b for a, b in self.intervals)

    __contains__ = contains

    def closure_contains(self, x: RationalLike) -> bool:
        x = as_rational(x)
        return any(lo <= x <= hi for lo, hi in self.closure())

    def length(self) -> Fraction:
        """Lebesgue measure of the set within [0, 1]."""
        return sum((min(b, ONE) - max(a, ZERO) for a, b in self.intervals), ZERO)

    def closure(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        """Closed components ``[lo, hi]`` of the closure taken relative to [0, 1]."""
        return _closure(self)


    # set operations
    def union(self, other: "OpenIntervalSet") -> "OpenIntervalSet":
        return OpenIntervalSet(self.intervals + other.intervals)

    def intersection(self, other: "OpenIntervalSet") -> "OpenIntervalSet":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return OpenIntervalSet(tuple(out))

    def subset_of(self, other: "OpenIntervalSet") -> bool:
        return all(any(c <= a and b <= d for c, d in other.intervals)
                   for a, b in self.intervals)

    def endpoints(self):
        """Endpoints that lie in the domain (these are where boundary mass can sit)."""
        pts = set()
        for a, b in self.intervals:
            if 0 <= a <= 1:
                pts.add(a)
            if 0 <= b <= 1:
                pts.add(b)
        return sorted(pts)

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return "|".join("(%s,%s)" % (a, b) for a, b in self.intervals)


@functools.lru_cache(maxsize=65536)
def _closure(s: OpenIntervalSet) -> Tuple[Tuple[Fraction, Fraction], ...]:
    pieces = []
    for a, b in s.intervals:
        lo, hi = max(a, ZERO), min(b, ONE)
        if pieces and pieces[-1][1] >= lo:
            pieces[-1] = (pieces[-1][0], hi)
        else:
            pieces.append((lo, hi))
    return tuple(pieces)


def _canonical(pairs) -> Tuple[Tuple[Fraction, Fraction], ...]:
    clipped = []
    for a, b in pairs:
        a, b = as_rational(a), as_rational(b)
        if a < 0:
            a = LOW
        if b > 1:
            b = HIGH
        # empty within [0, 1]: degenerate, or entirely outside the domain
        if a >= b or b <= 0 or a >= 1:
            continue
        clipped.append((a, b))
    clipped.sort()
    merged = []
    for a, b in clipped:
        if merged and a < merged[-1][1]:
            if b > merged[-1][1]:
                merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return tuple(merged)


def normalize(intervals: Iterable[Tuple[RationalLike, RationalLike]]) -> OpenIntervalSet:
    """Canonical disjoint-union form of a union of open intervals, clipped to [0, 1]."""
    return OpenIntervalSet(tuple(intervals))


SetTuple = Tuple[OpenIntervalSet, ...]


def set_tuple(*coords) -> SetTuple:
    """Build a SetTuple from OpenIntervalSets or lists of interval pairs."""
    out = []
    for c in coords:
        out.append(c if isinstance(c, OpenIntervalSet) else normalize(c))
    if not out:
        raise ValueError("a set tuple needs at least one coordinate")
    return tuple(out)


def closure_subset(inner: OpenIntervalSet, outer: OpenIntervalSet) -> bool:
    """True iff the relative closure of ``inner`` lies inside ``outer``."""
    for lo, hi in inner.closure():
        if not any(a < lo and hi < b for a, b in outer.intervals):
            return False
    return True


def refines(sigma: Sequence[OpenIntervalSet], pi: Sequence[OpenIntervalSet]) -> bool:
    if len(sigma) != len(pi):
        raise ValueError("arity mismatch: %d vs %d" % (len(sigma), len(pi)))
    return all(closure_subset(s, p) for s, p in zip(sigma, pi))


@functools.lru_cache(maxsize=65536)
def complement_of_closure(sigma: OpenIntervalSet) -> OpenIntervalSet:
    """The relatively open set [0, 1] minus the closure of ``sigma``."""
    out = []
    prev = LOW
    for lo, hi in sigma.closure():
        if prev == LOW:
            if lo > 0:
                out.append((LOW, lo))
        elif prev < lo:
            out.append((prev, lo))
        prev = hi
    if prev == LOW:
        return OpenIntervalSet.full()
    if prev < 1:
        out.append((prev, HIGH))
    return OpenIntervalSet(tuple(out))


def shrink(sigma: OpenIntervalSet, margin: Fraction) -> OpenIntervalSet:
    """Pull every in-domain endpoint inward by ``margin``."""
    out = []
    for a, b in sigma.intervals:
        a2 = a if a == LOW else a + margin
        b2 = b if b == HIGH else b - margin
        out.append((a2, b2))
    return OpenIntervalSet(tuple(out))


# refinement enumeration

def rational_grid(max_den: int):
    """All rationals in [0, 1] with denominator at most ``max_den``, sorted."""
    return sorted({Fraction(j, d) for d in range(1, max_den + 1) for j in range(d + 1)})


def _birth(g: Fraction, anchor: Fraction, below: bool) -> int:
    # first fuel at which grid point g is an admissible endpoint for a
    # component whose original endpoint is `anchor`
    gap = (g - anchor) if below else (anchor - g)
    need = -(-gap.denominator // gap.numerator)  # ceil(1 / gap)
    return max(g.denominator, need)


def _component_choices(a: Fraction, b: Fraction, grid, fuel: int):
    lows = [(a, 1)] if a == LOW else []
    lows += [(g, _birth(g, a, True)) for g in grid if a < g < 1]
    highs = [(b, 1)] if b == HIGH else []
    highs += [(g, _birth(g, b, False)) for g in grid if 0 < g < b]
    out = []
    for lo, blo in lows:
        for hi, bhi in highs:
            if lo < hi:
                birth = max(blo, bhi)
                if birth <= fuel:
                    out.append(((lo, hi), birth))
    return out


def _coordinate_refinements(p: OpenIntervalSet, grid, fuel: int):
    combos = [((), 1)]
    for a, b in p.intervals:
        choices = _component_choices(a, b, grid, fuel)
        combos = [(acc + (iv,), max(bacc, biv)) for acc, bacc in combos for iv, biv in choices]
    if not p.intervals:
        return []
    return [(OpenIntervalSet(ivs), birth) for ivs, birth in combos]


_REFINEMENT_CACHE: dict = {}


def enumerate_refinements(pi: Sequence[OpenIntervalSet], fuel: int):
    """All refinements of ``pi`` with grid endpoints of denominator <= fuel.

    Every in-domain endpoint sits at least ``1/fuel`` inside the matching
    endpoint of ``pi``.  The list for ``fuel`` is a prefix of the list for
    ``fuel + 1``: entries are ordered by the fuel at which they first appear.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    key = (tuple(pi), fuel)
    hit = _REFINEMENT_CACHE.get(key)
    if hit is not None:
        return list(hit)
    grid = rational_grid(fuel)
    per_coord = [_coordinate_refinements(p, grid, fuel) for p in pi]
    tuples = [((), 1)]
    for options in per_coord:
        tuples = [(acc + (s,), max(b0, b1)) for acc, b0 in tuples for s, b1 in options]
    tuples.sort(key=lambda t: (t[1], [s.intervals for s in t[0]]))
    result = tuple(t for t, _ in tuples)
    _REFINEMENT_CACHE[key] = result
    return list(result)


# parsing helpers shared by the CLI and JSON spec files

def parse_interval(text: str, domain=None) -> Tuple[Fraction, Fraction]:
    """Parse ``(a,b)``, ``(a,1]`` or ``[0,b)`` into an open pair.

    A closed bracket is only meaningful at a domain edge, where it maps to
    the out-of-domain sentinel.
    """
    text = text.strip()
    if len(text) < 5 or text[0] not in "([" or text[-1] not in ")]":
        raise ValueError("malformed interval: %r" % text)
    left, right = text[1:-1].split(",")
    a, b = as_rational(left.strip()), as_rational(right.strip())
    if domain is not None:
        # affine map of [lo, hi] onto the unit interval
        lo, hi = domain
        a, b = (a - lo) / (hi - lo), (b - lo) / (hi - lo)
    if text[0] == "[":
        if a > 0:
            raise ValueError("closed left end only allowed at or below 0: %r" % text)
        a = LOW
    if text[-1] == "]":
        if b < 1:
            raise ValueError("closed right end only allowed at or above 1: %r" % text)
        b = HIGH
    return a, b


def parse_set(text: str, domain=None) -> OpenIntervalSet:
    text = text.strip()
    if text in ("{}", "", "empty"):
        return OpenIntervalSet.empty()
    return normalize(parse_interval(part, domain) for part in text.split("|"))


def parse_set_tuple(text: str, domain=None) -> SetTuple:
    """``;`` separates coordinates, ``|`` separates the intervals of one set."""
    return set_tuple(*[parse_set(part, domain) for part in text.split(";")])
