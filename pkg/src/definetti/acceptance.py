"""Acceptance checks, shared by ``definetti selftest`` and the test suite.

Each check returns ``(passed, detail)``.  Ground truths are computed
independently of the code under test where possible (closed-form tails,
explicit products, Lebesgue lengths).
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import DeFinettiQuery, chi_from_mu, definetti_lower
from .intervals import HIGH, LOW, OpenIntervalSet, parse_set
from .moments import dist_from_moments, integrate_continuous, uniform_moments
from .oracles import algebra_lower, make_event
from .polynomials import indicator_poly, split_signs
from .processes import (MeasureSpec, ProcessSpec, as_marginal_oracle, as_mu_oracle,
                        polya_marginal, polya_sequential)
from .reals import LowerReal, UpperReal, signed_sum
from .transform import CLOSED_FORM, transform

F = Fraction
Result = Tuple[bool, str]

#: wall-clock budget for the convergence searches in check 1
TAIL_BUDGET_SECONDS = 300.0
#: fuels still checked for soundness after the tolerance is reached
SOUNDNESS_TAIL = 4


def _monotone(column: Sequence[Fraction]) -> bool:
    return all(a <= b for a, b in zip(column, column[1:]))


def _fmt(q: Fraction) -> str:
    if len(str(q)) > 40:
        return "%.6f" % float(q)
    return "%s (%.6f)" % (q, float(q))


# 1

def check_beta_tail(chi=None, thresholds=(F(1, 4), F(1, 2), F(3, 4)), max_fuel: int = 20,
                    budget: float = TAIL_BUDGET_SECONDS) -> Result:
    chi = chi or as_marginal_oracle(ProcessSpec("polya", alpha=F(1), beta=F(1)))
    pi = (parse_set("(1/2,1]"),)
    notes = []
    ok = True
    for c in thresholds:
        truth = 1 - c  # Pr(theta > c) for uniform theta
        q = DeFinettiQuery(pi, [[c]])
        start = time.monotonic()
        column = []
        reached = None
        overshoot = False
        for fuel in range(1, max_fuel + 1):
            v = definetti_lower(chi, q, fuel)
            column.append(v)
            if v > truth:
                overshoot = True
                notes.append("c=%s fuel %d: %s exceeds %s" % (c, fuel, _fmt(v), truth))
                break
            if reached is None and v >= truth - F(1, 10):
                reached = fuel
            if reached is not None and fuel >= reached + SOUNDNESS_TAIL:
                break
            if time.monotonic() - start > budget:
                break
        if overshoot:
            ok = False
        elif reached is None:
            ok = False
            notes.append("c=%s: best %s < %s after fuel %d"
                         % (c, _fmt(max(column)), _fmt(truth - F(1, 10)), len(column)))
        elif not _monotone(column):
            ok = False
            notes.append("c=%s: column not monotone" % c)
        else:
            notes.append("c=%s: %s at fuel %d, sound through fuel %d"
                         % (c, _fmt(column[reached - 1]), reached, len(column)))
    return ok, "; ".join(notes)


# 2

PARAMS = ((F(1), F(1)), (F(2), F(1)), (F(3, 2), F(5, 2)), (F(1, 3), F(7, 2)))


def check_polya_identity() -> Result:
    for a, b in PARAMS:
        for n in range(0, 9):
            product = F(1)
            for i in range(n):
                product *= (a + i) / (a + b + i)
            pattern = "1" * n
            g = polya_marginal(a, b, pattern)
            s = polya_sequential(a, b, pattern)
            if not g == s == product:
                return False, "alpha=%s beta=%s n=%d: gamma %s, urn %s, product %s" % (
                    a, b, n, g, s, product)
    return True, "4 parameter pairs, n <= 8, exact"


# 3

def check_atom(max_fuel: int = 16) -> Result:
    chi = as_marginal_oracle(ProcessSpec("constant_atom", atom=F(1, 2)))
    hit = DeFinettiQuery((parse_set("(2/5,3/5)"),), [[F(9, 10)]])
    miss = DeFinettiQuery((parse_set("(3/5,4/5)"),), [[F(9, 10)]])
    col = [definetti_lower(chi, hit, f) for f in range(1, max_fuel + 1)]
    zeros = [definetti_lower(chi, miss, f) for f in range(1, max_fuel + 1)]
    if any(v > 1 for v in col) or not _monotone(col):
        return False, "bound column out of range or not monotone"
    if max(col) < F(9, 10):
        return False, "best %s < 9/10 by fuel %d" % (_fmt(max(col)), max_fuel)
    if any(zeros):
        return False, "avoiding interval gave nonzero %s" % _fmt(max(zeros))
    first = next(f for f, v in enumerate(col, 1) if v >= F(9, 10))
    return True, "%s at fuel %d; avoiding query 0 through fuel %d" % (_fmt(col[first - 1]), first, max_fuel)


# 4

def check_dirac(max_fuel: int = 12) -> Result:
    chi = as_marginal_oracle(ProcessSpec("iid_uniform"))
    pi = (parse_set("(1/4,3/4)"),)
    low = DeFinettiQuery(pi, [[F(1, 4)]])
    high = DeFinettiQuery(pi, [[F(3, 4)]])
    col = [definetti_lower(chi, low, f) for f in range(1, max_fuel + 1)]
    zeros = [definetti_lower(chi, high, f) for f in range(1, max_fuel + 1)]
    if any(zeros):
        return False, "threshold 3/4 gave nonzero %s" % _fmt(max(zeros))
    if not _monotone(col) or max(col) > 1:
        return False, "column not monotone or above 1"
    if max(col) < F(9, 10):
        return False, "best %s < 9/10 by fuel %d" % (_fmt(max(col)), max_fuel)
    return True, "threshold 1/4 reaches %s; threshold 3/4 exactly 0" % _fmt(max(col))


# 5

def check_moment_roundtrip(max_fuel: int = 16, grid_fuel: int = 20) -> Result:
    oracle = uniform_moments(1)
    sigma = (parse_set("(1/4,3/4)"),)
    col = [dist_from_moments(oracle, sigma, f) for f in range(1, max_fuel + 1)]
    if any(v > F(1, 2) for v in col) or not _monotone(col):
        return False, "moment bounds exceed 1/2 or are not monotone"
    if max(col) < F(2, 5):
        return False, "best %s < 2/5" % _fmt(max(col))
    chi = as_marginal_oracle(ProcessSpec("iid_uniform"))
    lo, hi = integrate_continuous(chi, [1], grid_fuel)
    if not lo <= F(1, 2) <= hi or hi - lo > F(1, 20):
        return False, "E x bracket [%s, %s] too wide or misses 1/2" % (lo, hi)
    return True, "moments reach %s; E x in [%s, %s]" % (_fmt(max(col)), lo, hi)


# 6

def check_forward(max_fuel: int = 24) -> Result:
    mu = as_mu_oracle(MeasureSpec("beta_bernoulli", alpha=F(2), beta=F(1)))
    half = parse_set("(1/2,1]")
    col = [chi_from_mu(mu, (half, half), f) for f in range(1, max_fuel + 1)]
    truth = F(2 * 3, 3 * 4)
    if any(v > truth for v in col) or not _monotone(col):
        return False, "bounds exceed 1/2 or are not monotone"
    if max(col) < F(2, 5):
        return False, "best %s < 2/5" % _fmt(max(col))
    return True, "reaches %s by fuel %d" % (_fmt(max(col)), max_fuel)


# 7

def _roundtrip_battery():
    pts = ["0", "1/4", "1/3", "1/2", "2/3", "1"]
    singles = []
    for a, b in itertools.combinations(pts, 2):
        lo = "[0" if a == "0" else "(" + a
        hi = "1]" if b == "1" else b + ")"
        singles.append(parse_set("%s,%s" % (lo, hi)))
    boxes = [(s,) for s in singles[:10]]
    boxes += [(singles[i], singles[j]) for i, j in [(0, 14), (14, 14), (5, 9), (9, 12), (3, 14),
                                                     (0, 0), (2, 8), (14, 13), (4, 11), (12, 12)]]
    return boxes[:20]


def check_transform(fuels: Sequence[int] = (1, 2, 3, 4, 5, 6)) -> Result:
    notes = []
    polya = ProcessSpec("polya", alpha=F(3, 2), beta=F(5, 2))
    res = transform(polya, depth=8)
    m = res.measure
    if not (res.status == CLOSED_FORM and m.kind == "beta_bernoulli" and m.alpha == F(3, 2)
            and m.beta == F(5, 2) and res.verified_depth >= 8):
        return False, "polya(3/2,5/2) transformed to %r" % (m,)
    cu = ProcessSpec("constant_uniform")
    res2 = transform(cu)
    if res2.measure.kind != "uniform_on_diracs" or res2.status != CLOSED_FORM:
        return False, "constant_uniform transformed to %r" % (res2.measure,)
    battery = _roundtrip_battery()
    for proc, out in ((polya, res), (cu, res2)):
        chi = as_marginal_oracle(proc)
        mu = as_mu_oracle(out.measure, allow_moments=True)
        for box in battery:
            exact = chi.event_prob(make_event(list(box)))
            for f in fuels:
                v = chi_from_mu(mu, box, f)
                if v > exact:
                    return False, "%s box %s fuel %d: forward %s > exact %s" % (
                        proc.kind, ";".join(map(str, box)), f, v, exact)
        notes.append("%s -> %s" % (proc.kind, out.measure.kind))
    return True, "; ".join(notes) + "; %d-box round trip sound at fuels %s" % (
        len(battery), ",".join(map(str, fuels)))


# 8

def domination_battery() -> List[Tuple[OpenIntervalSet, ...]]:
    S = parse_set
    one = ["(1/4,3/4)", "(0,1/2)", "[0,1/3)", "(2/3,1]", "(1/10,1/5)", "(1/4,1/2)|(3/5,1]",
           "[0,1/5)|(2/5,3/5)|(4/5,1]", "(1/2,1]", "(0,1)", "(1/3,1/3)|(0,1/100)"]
    two = [("(1/4,3/4)", "(1/4,3/4)"), ("[0,1/2)", "(1/2,1]"), ("(0,1)", "(1/3,2/3)"),
           ("(1/8,1/4)|(1/2,1]", "(0,1/2)"), ("[0,1]", "(1/5,4/5)"), ("(2/5,3/5)", "[0,1/10)"),
           ("(1/2,1]", "(1/2,1]"), ("(0,1/4)|(3/4,1)", "(1/4,3/4)")]
    three = [("(1/4,3/4)", "(0,1)", "(1/2,1]"), ("[0,1/2)", "[0,1/2)", "[0,1/2)"),
             ("(1/3,2/3)", "(1/10,9/10)", "(0,1/4)|(1/2,1]"), ("(1/2,1]", "[0,1]", "(1/5,2/5)"),
             ("(0,1/3)", "(1/3,2/3)", "(2/3,1)"), ("[0,1/4)|(1/2,3/4)", "(1/4,1]", "(1/8,7/8)"),
             ("(3/5,1]", "(3/5,1]", "(3/5,1]")]
    out = [(S(a),) for a in one]
    out += [(S(a), S(b)) for a, b in two]
    out += [tuple(S(x) for x in t) for t in three]
    return out


def _grid(k: int, points: int = 10_000):
    per = {1: points, 2: 100, 3: 22}[k]
    axis = [F(j, per - 1) for j in range(per)] if k > 1 else [F(j, per) for j in range(per + 1)]
    return axis


def check_domination(builder: Callable = indicator_poly, ns: Sequence[int] = (1, 2, 3, 4),
                     expand_check: bool = True) -> Result:
    """-1 <= p <= 1_sigma on >= 10^4 grid points, exact arithmetic."""
    battery = domination_battery()
    checked = 0
    worst_esc = 0
    for sigma in battery:
        k = len(sigma)
        axis = _grid(k)
        member = [{x: s.contains(x) for x in axis} for s in sigma]
        for n in ns:
            approx = builder(n, sigma)
            worst_esc = max(worst_esc, approx.escalations)
            for x in itertools.product(axis, repeat=k):
                v = approx.evaluate(x)
                inside = all(m[xi] for m, xi in zip(member, x))
                if v < -1 or v > (1 if inside else 0):
                    return False, "sigma=%s n=%d x=%s: p=%s" % (
                        ";".join(map(str, sigma)), n, x, v)
                checked += 1
            if expand_check and n >= 2 and k == 1:
                # the sign-split pair must reassemble the same polynomial
                # (monomial expansion is only affordable for one variable)
                plus, minus = split_signs(approx.polynomial)
                for x in itertools.islice(itertools.product(axis, repeat=k), 0, None, 997):
                    v = plus.evaluate(x) - minus.evaluate(x)
                    inside = all(m[xi] for m, xi in zip(member, x))
                    if v < -1 or v > (1 if inside else 0):
                        return False, "sign split of sigma=%s n=%d at x=%s gives %s" % (
                            ";".join(map(str, sigma)), n, x, v)
    if worst_esc > 1:
        return False, "a Bernstein certificate needed %d escalations" % worst_esc
    return True, "%d sets, %d exact evaluations, escalations <= %d" % (len(battery), checked, worst_esc)


# 9

def _columns() -> Dict[str, List[Fraction]]:
    polya = as_marginal_oracle(ProcessSpec("polya", alpha=F(1), beta=F(1)))
    atom = as_marginal_oracle(ProcessSpec("constant_atom", atom=F(1, 2)))
    mu = as_mu_oracle(MeasureSpec("dirac_at_uniform"))
    q = DeFinettiQuery((parse_set("(1/2,1]"),), [[F(1, 2)]])
    q2 = DeFinettiQuery((parse_set("(1/4,3/4)"), parse_set("(1/2,1]")),
                        [[F(1, 2), F(-1)], [F(-1), F(1, 3)]])
    return {
        "polya tail": [definetti_lower(polya, q, f) for f in range(1, 9)],
        "atom two-row": [definetti_lower(atom, q2, f) for f in range(1, 7)],
        "moments": [dist_from_moments(uniform_moments(1), (parse_set("(0,1/3)"),), f)
                    for f in range(1, 9)],
        "forward": [chi_from_mu(mu, (parse_set("(0,1/2)"),), f) for f in range(1, 12)],
        "closure upper": [-integrate_continuous(polya, [2], f)[1] for f in range(1, 9)],
    }


def _signed_sum_cases():
    """Sign-split sums of streams converging to known targets."""
    def lower_to(t):
        return LowerReal(lambda n: t - F(1, n + 1))

    def upper_to(t):
        return UpperReal(lambda n: t + F(1, n + 1))
    cases = []
    targets = [F(1, 3), F(2, 7), F(5, 6), F(0), F(1)]
    for coeffs in [(1, -1, 2), (F(-3, 2), F(1, 2), 4), (5, -5, -5), (-1, -1, 1), (F(7, 3), 0, -2)]:
        pos = [t for c, t in zip(coeffs, targets) if c > 0]
        neg = [t for c, t in zip(coeffs, targets) if c < 0]
        s = signed_sum(coeffs, [lower_to(t) for t in pos], [upper_to(t) for t in neg])
        exact = sum(F(c) * t for c, t in zip(coeffs, targets) if c)
        cases.append((s, exact))
    return cases


def _permutation_family():
    S = parse_set
    return [S("(0,1/2)"), S("(1/2,1]"), S("(1/4,3/4)"), S("[0,1/3)|(2/3,1]"), S("[0,1]"),
            S("(1/3,2/3)")]


def builtin_processes():
    return [ProcessSpec("polya", alpha=F(3, 2), beta=F(5, 2)), ProcessSpec("iid_uniform"),
            ProcessSpec("constant_uniform"), ProcessSpec("constant_atom", atom=F(1, 2)),
            ProcessSpec("iid_bernoulli_mixture", mixture=((F(1, 3), F(1, 4)), (F(2, 3), F(1))))]


def check_global(oracles=None) -> Result:
    for name, col in _columns().items():
        if not _monotone(col):
            return False, "column %r not monotone: %s" % (name, col)
    for s, exact in _signed_sum_cases():
        for n in range(1, 30):
            if s.bound_at(n) > exact:
                return False, "signed_sum overshoots %s at fuel %d" % (exact, n)
    family = _permutation_family()
    count = 0
    oracles = oracles or [as_marginal_oracle(p) for p in builtin_processes()]
    for oracle in oracles:
        for k in range(1, 5):
            for combo in itertools.combinations_with_replacement(family, k):
                # query the oracle in the caller's order; algebra_lower would sort first
                boxes = all(len(s) == 1 for s in combo)
                values = {oracle.box_lower(perm, 1) if boxes else algebra_lower(oracle, perm, 1)
                          for perm in set(itertools.permutations(combo))}
                count += 1
                if len(values) != 1:
                    return False, "%r not permutation invariant on %s" % (
                        oracle, ";".join(map(str, combo)))
    return True, "monotone columns, signed_sum sound, %d permutation classes" % count


CHECKS = [
    (1, "beta tail recovery", check_beta_tail),
    (2, "moment identity", check_polya_identity),
    (3, "atom stress", check_atom),
    (4, "dirac de finetti measures", check_dirac),
    (5, "moment problem roundtrip", check_moment_roundtrip),
    (6, "forward direction", check_forward),
    (7, "transformation correctness", check_transform),
    (8, "polynomial domination", check_domination),
    (9, "global properties", check_global),
]


def run(ids: Optional[Sequence[int]] = None, emit=print) -> bool:
    all_ok = True
    for cid, name, fn in CHECKS:
        if ids and cid not in ids:
            continue
        start = time.monotonic()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, reported like one
            ok, detail = False, "%s: %s" % (type(exc).__name__, exc)
        emit("[%s] criterion %d %s: %s (%.1fs)" % ("PASS" if ok else "FAIL", cid, name, detail,
                                                   time.monotonic() - start))
        all_ok = all_ok and ok
    return all_ok
