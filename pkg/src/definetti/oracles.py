"""Oracle interfaces for sequence distributions and de Finetti measures.

A *marginal oracle* answers lower bounds on box probabilities
``Pr(X_1 in s_1, ..., X_k in s_k)`` for an exchangeable sequence.  Everything
else (algebra sets, closures, moments) is derived from it here.

Internally a query is an *event*: a tuple of ``(set, multiplicity, closed)``
triples.  Multiplicities let moment queries with large exponents stay cheap;
``closed`` asks about the relative closure of the set.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from .intervals import (OpenIntervalSet, SetTuple, as_rational, complement_of_closure,
                        shrink)

ZERO = Fraction(0)
ONE = Fraction(1)

Event = Tuple[Tuple[OpenIntervalSet, int, bool], ...]

#: product-box budget for the generic (non-exact) union search
GENERIC_BOX_LIMIT = 4096


def make_event(sets, mults=None, closed=False) -> Event:
    mults = [1] * len(sets) if mults is None else list(mults)
    if len(mults) != len(sets):
        raise ValueError("sets and multiplicities differ in length")
    counts: Dict[Tuple[OpenIntervalSet, bool], int] = {}
    for s, m in zip(sets, mults):
        if m < 0:
            raise ValueError("negative multiplicity")
        if m:
            counts[(s, closed)] = counts.get((s, closed), 0) + m
    return tuple(sorted(((s, m, c) for (s, c), m in counts.items()),
                        key=lambda t: (t[0].intervals, t[2])))


def _simplify(event: Event):
    """Drop certain coordinates; return None if the event is impossible."""
    kept = []
    for s, m, closed in event:
        if s.is_empty():
            return None
        if s.is_full():
            continue
        if closed and not complement_of_closure(s):
            continue
        kept.append((s, m, closed))
    return tuple(kept)


class MarginalOracle:
    """Distribution of an exchangeable sequence with values in [0, 1].

    Subclasses implement :meth:`box_lower`.  Oracles whose answers are exact
    probabilities set ``exact = True`` and implement :meth:`event_prob`,
    which must also handle closed coordinates.
    """

    exact = False

    def box_lower(self, sigma: SetTuple, fuel: int) -> Fraction:
        raise NotImplementedError

    def event_prob(self, event: Event) -> Fraction:
        raise NotImplementedError("oracle %r has no exact event probabilities" % self)

    def profile(self, sigma: SetTuple, closed: bool):
        """Hashable summary of a set tuple.

        Equal profiles must give equal probabilities for every choice of
        multiplicities; callers use it to share work between set tuples.
        """
        return tuple(sigma), closed


def _expanded_coords(event: Event):
    coords = []
    for s, m, closed in event:
        coords.extend([s] * m)
    return coords


def _event_lower(oracle: MarginalOracle, event: Event, fuel: int) -> Fraction:
    event = _simplify(event)
    if event is None:
        return ZERO
    if not event:
        return ONE
    if any(closed for _, _, closed in event):
        raise ValueError("open-set lower bounds take open coordinates only")
    if oracle.exact:
        return oracle.event_prob(event)
    coords = _expanded_coords(event)
    total = ZERO
    for boxes in itertools.product(*[s.intervals for s in coords]):
        total += oracle.box_lower(tuple(OpenIntervalSet((iv,)) for iv in boxes), fuel)
    return total


def algebra_lower(oracle: MarginalOracle, sigma: SetTuple, fuel: int) -> Fraction:
    """Lower bound on ``Pr(X_i in sigma_i for all i)`` for algebra-valued coordinates.

    Each coordinate is split into its disjoint components and the box
    bounds of the resulting disjoint product boxes are summed.
    """
    return _event_lower(oracle, make_event(list(sigma)), fuel)


def _union_lower(oracle: MarginalOracle, rhos, fuel: int) -> Fraction:
    """Lower bound on ``Pr(exists i: X_i in rho_i)`` for open rho_i.

    The domain of each coordinate is cut into ``rho_i`` and the open set
    ``W_i`` beyond the closure of ``rho_i``; only the finitely many cut
    points are lost.  Disjoint product cells with at least one coordinate
    in its ``rho`` are summed.
    """
    rhos = list(rhos)
    if any(r.is_full() for r in rhos):
        return ONE
    if all(r.is_empty() for r in rhos):
        return ZERO
    outs = [complement_of_closure(r) for r in rhos]
    if oracle.exact:
        whole = make_event([r.union(w) for r, w in zip(rhos, outs)])
        rest = make_event(outs)
        return max(ZERO, _event_lower(oracle, whole, fuel) - _event_lower(oracle, rest, fuel))
    pieces = [[(iv, True) for iv in r.intervals] + [(iv, False) for iv in w.intervals]
              for r, w in zip(rhos, outs)]
    count = 1
    for p in pieces:
        count *= len(p)
    if count <= GENERIC_BOX_LIMIT:
        total = ZERO
        for cell in itertools.product(*pieces):
            if any(inside for _, inside in cell):
                total += oracle.box_lower(tuple(OpenIntervalSet((iv,)) for iv, _ in cell), fuel)
        return total
    # too many cells: a single coordinate already gives a sound bound
    return max(_event_lower(oracle, make_event([r]), fuel) for r in rhos)


def _closed_upper_event(oracle: MarginalOracle, sets, mults, fuel: int) -> Fraction:
    event = _simplify(make_event(list(sets), mults, closed=True))
    if event is None:
        return ZERO
    if not event:
        return ONE
    if oracle.exact:
        return oracle.event_prob(event)
    taus = []
    for s, m, _ in event:
        taus.extend([complement_of_closure(s)] * m)
    best = ZERO
    for d in range(1, fuel + 1):
        rhos = [shrink(t, Fraction(1, d)) for t in taus]
        best = max(best, _union_lower(oracle, rhos, fuel))
    return min(ONE, ONE - best)


def closed_upper(oracle: MarginalOracle, sigma: SetTuple, fuel: int) -> Fraction:
    """Upper bound on ``Pr(X_i in closure(sigma_i) for all i)``.

    Computed as one minus a lower bound on the open event that some
    coordinate falls outside its closure.  Exact oracles answer directly.
    """
    return _closed_upper_event(oracle, list(sigma), None, fuel)


def moment_bounds(oracle: MarginalOracle, labels, exponents, fuel: int):
    """(lower, upper) on ``E prod V_{labels[i]} ** exponents[i]``."""
    if len(labels) != len(exponents):
        raise ValueError("labels and exponents differ in length")
    lo = _event_lower(oracle, make_event(list(labels), exponents), fuel)
    hi = _closed_upper_event(oracle, list(labels), exponents, fuel)
    return lo, hi


# right order topology

ConstraintMatrix = Tuple[Tuple[Fraction, ...], ...]


def constraint_matrix(rows) -> ConstraintMatrix:
    rows = tuple(tuple(as_rational(c) for c in row) for row in rows)
    if not rows or not rows[0]:
        raise ValueError("constraint matrix must be at least 1 x 1")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged constraint matrix")
    return rows


ALWAYS = Fraction(-1)


class RightOrderOracle:
    """Joint law of the variables ``V_tau = nu(tau)`` under the right order topology.

    :meth:`upset_lower` bounds ``Pr(exists i: forall j: V_{labels[j]} > C[i][j])``
    from below.  Entries equal to ``-1`` are always satisfied.  ``exact``
    marks oracles whose answers do not depend on fuel.
    """

    exact = False

    def upset_lower(self, C: ConstraintMatrix, labels: SetTuple, fuel: int) -> Fraction:
        raise NotImplementedError


DeFinettiMeasureRepr = RightOrderOracle


def reduce_upset(labels: SetTuple, C: ConstraintMatrix):
    """Resolve entries that are decided by range alone.

    Returns ``True``/``False`` for a decided event, else the reduced matrix
    with satisfied entries replaced by ``-1``.
    """
    rows = []
    for row in C:
        new = []
        dead = False
        for lab, c in zip(labels, row):
            if lab.is_empty():
                ok = c < 0
            elif lab.is_full():
                ok = c < 1
            elif c >= 1:
                ok = False
            elif c < 0:
                ok = True
            else:
                new.append(c)
                continue
            if not ok:
                dead = True
                break
            new.append(ALWAYS)
        if dead:
            continue
        if all(c == ALWAYS for c in new):
            return True
        rows.append(tuple(new))
    if not rows:
        return False
    return tuple(rows)


def query_upset(oracle: RightOrderOracle, labels: SetTuple, C, fuel: int) -> Fraction:
    C = constraint_matrix(C)
    labels = tuple(labels)
    if len(labels) != len(C[0]):
        raise ValueError("arity mismatch: %d labels, %d columns" % (len(labels), len(C[0])))
    reduced = reduce_upset(labels, C)
    if reduced is True:
        return ONE
    if reduced is False:
        return ZERO
    value = oracle.upset_lower(reduced, labels, fuel)
    return min(ONE, max(ZERO, value))
