"""Replace a stateful sequential sampler by a directing-measure sampler.

Binary processes go through the Beta-Bernoulli recognizer.  The other
built-ins have known directing measures, which are checked against the
process oracle on a battery of boxes before being emitted.  Anything not
recognized is emitted as a measure backed by the process itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .intervals import HIGH, LOW, OpenIntervalSet
from .oracles import make_event
from .processes import (MeasureSpec, ProcessSpec, as_marginal_oracle, mixture_counts,
                        polya_counts, recognize_beta_bernoulli)

ZERO = Fraction(0)
ONE = Fraction(1)

CLOSED_FORM = "closed-form"
ORACLE = "oracle"


@dataclass
class TransformResult:
    process: ProcessSpec
    measure: MeasureSpec
    verified_depth: int
    status: str
    notes: List[str] = field(default_factory=list)


def measure_box_prob(measure: MeasureSpec, sets: Sequence[OpenIntervalSet]) -> Fraction:
    """Exact ``E prod V_{sets[i]}`` for a closed-form measure."""
    if measure.kind == "dirac_at_uniform":
        out = ONE
        for s in sets:
            out *= s.length()
        return out
    if measure.kind == "uniform_on_diracs":
        common = OpenIntervalSet.full()
        for s in sets:
            common = common.intersection(s)
        return common.length()
    if measure.kind == "dirac_at_atom":
        return ONE if all(s.contains(measure.atom) for s in sets) else ZERO
    if measure.kind in ("beta_bernoulli", "bernoulli_mixture"):
        ones = zeros = 0
        for s in sets:
            has0, has1 = s.contains(0), s.contains(1)
            if has0 and has1:
                continue
            if not (has0 or has1):
                return ZERO
            if has1:
                ones += 1
            else:
                zeros += 1
        if measure.kind == "beta_bernoulli":
            return polya_counts(measure.alpha, measure.beta, ones, zeros)
        return mixture_counts(measure.mixture)(ones, zeros)
    raise ValueError("no closed form for %r" % measure.kind)


def _battery_sets():
    pts = [Fraction(j, 4) for j in range(5)]
    out = [OpenIntervalSet.full()]
    for a, b in itertools.combinations(pts, 2):
        out.append(OpenIntervalSet(((LOW if a == 0 else a, HIGH if b == 1 else b),)))
    out.append(OpenIntervalSet(((LOW, Fraction(1, 4)), (Fraction(1, 2), HIGH))))
    return out


def box_battery(depth: int):
    """Set tuples of length up to ``depth`` drawn from a small fixed family."""
    family = _battery_sets()
    for k in range(1, depth + 1):
        for combo in itertools.combinations_with_replacement(range(len(family)), k):
            yield tuple(family[i] for i in combo)


def verify_measure(process: ProcessSpec, measure: MeasureSpec, depth: int) -> Optional[str]:
    """None if the measure reproduces every battery box exactly, else the first failure."""
    oracle = as_marginal_oracle(process)
    for sets in box_battery(depth):
        want = oracle.event_prob(make_event(list(sets)))
        got = measure_box_prob(measure, sets)
        if want != got:
            return "box %s: process %s, measure %s" % (";".join(map(str, sets)), want, got)
    return None


_KNOWN = {
    "iid_uniform": lambda p: MeasureSpec("dirac_at_uniform"),
    "constant_uniform": lambda p: MeasureSpec("uniform_on_diracs"),
    "constant_atom": lambda p: MeasureSpec("dirac_at_atom", atom=p.atom),
}


def transform(process: ProcessSpec, depth: int = 8, box_depth: int = 3) -> TransformResult:
    if process.binary:
        rec = recognize_beta_bernoulli(as_marginal_oracle(process), depth)
        if rec.measure is not None:
            return TransformResult(process, rec.measure, rec.verified_depth, CLOSED_FORM,
                                   list(rec.rejected))
        notes = list(rec.rejected)
    else:
        measure = _KNOWN[process.kind](process)
        bad = verify_measure(process, measure, box_depth)
        if bad is None:
            return TransformResult(process, measure, box_depth, CLOSED_FORM, [])
        notes = [bad]
    return TransformResult(process, MeasureSpec("definetti_oracle", process=process), 0,
                           ORACLE, notes)
