"""Rational polynomials approximating indicator functions from below.

For ``n >= 2`` and a union of product sets ``sigma`` in ``[0, 1]^k`` we build
a polynomial ``p`` with

    -1 <= p(x) <= 1_sigma(x)                 on [0, 1]^k
    1_sigma(x) - p(x) <= 1/n                  off sigma, and wherever the
                                              max-norm 1/n-ball around x
                                              lies in one product of sigma

so ``p_n -> 1_sigma`` pointwise from below.  The construction:

* each coordinate set gets a C^1 piecewise-quadratic bump ``h`` that is 0
  off the set and 1 at distance >= 1/n from its complement;
* each bump is replaced by its univariate Bernstein polynomial ``u`` of
  degree m; for ``h`` whose derivative is L-Lipschitz,
  ``|B_m h - h| <= L / (8 m)`` (second-order Taylor bound with
  ``E (J/m - x)^2 = x(1-x)/m``), and ``0 <= u <= 1``;
* factors are multiplied per product set, products are combined over the
  union by ``1 - prod(1 - P_i)``, and the summed certified error is
  subtracted.

Everything is exact rational arithmetic.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .intervals import HIGH, LOW, OpenIntervalSet, as_rational

ZERO = Fraction(0)
ONE = Fraction(1)

Exponents = Tuple[int, ...]


class Polynomial:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("arity", "terms", "_intform")

    def __init__(self, arity: int, terms=None):
        if arity < 1:
            raise ValueError("arity must be >= 1")
        self.arity = arity
        clean: Dict[Exponents, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != arity or any(e < 0 for e in exps):
                raise ValueError("bad exponent vector %r" % (exps,))
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, ZERO) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean
        self._intform = None

    def integer_form(self) -> Tuple[int, List[Tuple[Exponents, int]]]:
        """``(D, [(e, N_e)])`` with every coefficient equal to ``N_e / D``."""
        if self._intform is None:
            den = math.lcm(*[c.denominator for c in self.terms.values()]) if self.terms else 1
            self._intform = (den, [(e, c.numerator * (den // c.denominator))
                                   for e, c in self.terms.items()])
        return self._intform

    @classmethod
    def constant(cls, arity: int, c) -> "Polynomial":
        return cls(arity, {(0,) * arity: as_rational(c)})

    @classmethod
    def zero(cls, arity: int) -> "Polynomial":
        return cls(arity)

    @classmethod
    def univariate(cls, coeffs: Sequence, arity: int = 1, index: int = 0) -> "Polynomial":
        terms = {}
        for e, c in enumerate(coeffs):
            if c:
                exps = [0] * arity
                exps[index] = e
                terms[tuple(exps)] = c
        return cls(arity, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.arity == other.arity
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def _check(self, other: "Polynomial"):
        if self.arity != other.arity:
            raise ValueError("arity mismatch")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, ZERO) + c
        return Polynomial(self.arity, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = as_rational(other)
            return Polynomial(self.arity, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, ZERO) + c1 * c2
        return Polynomial(self.arity, terms)

    __rmul__ = __mul__

    def evaluate(self, x: Sequence) -> Fraction:
        if len(x) != self.arity:
            raise ValueError("expected %d coordinates" % self.arity)
        x = [as_rational(v) for v in x]
        powers: List[Dict[int, Fraction]] = [{} for _ in x]
        total = ZERO
        for exps, c in self.terms.items():
            term = c
            for i, e in enumerate(exps):
                if e:
                    p = powers[i].get(e)
                    if p is None:
                        p = powers[i][e] = x[i] ** e
                    term *= p
            total += term
        return total

    __call__ = evaluate

    def dumps(self) -> str:
        """Exponent/coefficient text lines: ``e_1 ... e_k p/q``."""
        lines = []
        for exps in sorted(self.terms):
            c = self.terms[exps]
            lines.append(" ".join(str(e) for e in exps) + " %d/%d" % (c.numerator, c.denominator))
        return "\n".join(lines)

    def __repr__(self):
        return "Polynomial(arity=%d, %d terms, degree %d)" % (self.arity, len(self.terms), self.degree())


def priced(poly: Polynomial, value_of) -> Fraction:
    """Exact ``sum_e c_e * value_of(e, c_e > 0)``, reduced once at the end."""
    den, nums = poly.integer_form()
    values = [value_of(e, n > 0) for e, n in nums]
    if not values:
        return ZERO
    vden = math.lcm(*[v.denominator for v in values])
    acc = 0
    for (_, n), v in zip(nums, values):
        acc += n * v.numerator * (vden // v.denominator)
    return Fraction(acc, den * vden)


def split_signs(p: Polynomial) -> Tuple[Polynomial, Polynomial]:
    """``p = p_plus - p_minus`` with both parts having positive coefficients."""
    plus = {e: c for e, c in p.terms.items() if c > 0}
    minus = {e: -c for e, c in p.terms.items() if c < 0}
    return Polynomial(p.arity, plus), Polynomial(p.arity, minus)


def q_polynomial(p: Polynomial) -> Polynomial:
    """The 2k-variable ``q(x, y) = p_plus(x) - p_minus(y)``."""
    plus, minus = split_signs(p)
    k = p.arity
    terms = {}
    for e, c in plus.terms.items():
        terms[e + (0,) * k] = c
    for e, c in minus.terms.items():
        terms[(0,) * k + e] = -c
    return Polynomial(2 * k, terms)


def diagonal(q: Polynomial) -> Polynomial:
    """Restrict a 2k-variable polynomial to the diagonal ``y = x``."""
    if q.arity % 2:
        raise ValueError("diagonal needs an even arity")
    k = q.arity // 2
    terms: Dict[Exponents, Fraction] = {}
    for e, c in q.terms.items():
        d = tuple(a + b for a, b in zip(e[:k], e[k:]))
        terms[d] = terms.get(d, ZERO) + c
    return Polynomial(k, terms)


# smooth bumps

def smoothstep(t: Fraction, w: Fraction) -> Fraction:
    """C^1 ramp: 0 for t <= 0, 1 for t >= w, two quadratic pieces between."""
    if t <= 0:
        return ZERO
    if t >= w:
        return ONE
    if 2 * t <= w:
        return 2 * t * t / (w * w)
    s = w - t
    return 1 - 2 * s * s / (w * w)


def bump(x: Fraction, a: Fraction, b: Fraction, w: Fraction) -> Fraction:
    left = ONE if a == LOW else smoothstep(x - a, w)
    right = ONE if b == HIGH else smoothstep(b - x, w)
    return left * right


def coordinate_bump(s: OpenIntervalSet, x: Fraction, w: Fraction) -> Fraction:
    return sum((bump(x, a, b, w) for a, b in s.intervals), ZERO)


def derivative_lipschitz(s: OpenIntervalSet, w: Fraction) -> Fraction:
    """Lipschitz constant of the derivative of ``coordinate_bump`` on [0, 1]."""
    worst = ZERO
    for a, b in s.intervals:
        one_sided = a == LOW or b == HIGH
        if one_sided or b - a >= 2 * w:
            worst = max(worst, 4 / (w * w))
        else:
            # product of two ramps: (fg)'' <= |f''| + 2|f'||g'| + |g''|
            worst = max(worst, 16 / (w * w))
    return worst


class Urysohn:
    """Continuous ``f = H - 1/n`` separating the inner region from the complement.

    ``H`` equals 1 where some product of ``rows`` contains the max-norm
    1/n-ball around x, equals 0 off the union, and lies in [0, 1] between.
    """

    def __init__(self, n: int, rows: Sequence[Sequence[OpenIntervalSet]]):
        if n < 2:
            raise ValueError("Urysohn functions need n >= 2 (use the zero polynomial for n = 1)")
        rows = [tuple(r) for r in rows]
        if not rows:
            raise ValueError("need at least one product set")
        k = len(rows[0])
        if any(len(r) != k for r in rows):
            raise ValueError("all product sets must have the same arity")
        self.n = n
        self.arity = k
        self.rows = tuple(rows)
        self.width = Fraction(1, n)
        self.offset = Fraction(1, n)

    def H(self, x: Sequence) -> Fraction:
        x = [as_rational(v) for v in x]
        miss = ONE
        for row in self.rows:
            prod = ONE
            for s, xi in zip(row, x):
                prod *= coordinate_bump(s, xi, self.width)
                if not prod:
                    break
            miss *= 1 - prod
        return 1 - miss

    def __call__(self, x: Sequence) -> Fraction:
        return self.H(x) - self.offset


def urysohn(n: int, sigma: Sequence[OpenIntervalSet]) -> Urysohn:
    return Urysohn(n, [tuple(sigma)])


# univariate Bernstein factors

class BernsteinFactor:
    """Univariate Bernstein polynomial of a coordinate bump, in monomial form.

    Coefficients are kept as integers over a common denominator so that
    evaluation and conversion stay fast.
    """

    def __init__(self, s: OpenIntervalSet, w: Fraction, degree: int):
        self.set = s
        self.degree = degree
        self.lipschitz = derivative_lipschitz(s, w)
        self.error = self.lipschitz / (8 * degree)
        m = degree
        values = [coordinate_bump(s, Fraction(j, m), w) for j in range(m + 1)]
        den = 1
        for v in values:
            den = den * v.denominator // math.gcd(den, v.denominator)
        arr = np.array([v.numerator * (den // v.denominator) for v in values], dtype=object)
        nums = []
        binom = 1
        for e in range(m + 1):
            nums.append(binom * arr[0])
            arr = arr[1:] - arr[:-1]
            binom = binom * (m - e) // (e + 1)
        self._nums = nums
        self._den = den
        self.bernstein_values = values

    def coefficients(self) -> List[Fraction]:
        return [Fraction(v, self._den) for v in self._nums]

    def evaluate(self, x) -> Fraction:
        x = as_rational(x)
        return self._horner(x.numerator, x.denominator)

    def _horner(self, r: int, s: int) -> Fraction:
        acc = 0
        spow = 1
        for c in reversed(self._nums):
            acc = acc * r + c * spow
            spow *= s
        # acc = sum c_e r^e s^(m-e); divide by s^m
        return Fraction(acc, self._den * s ** self.degree)

    def polynomial(self, arity: int, index: int) -> Polynomial:
        return Polynomial.univariate(self.coefficients(), arity, index)


def _degree_for(lipschitz: Fraction, budget: Fraction) -> int:
    # smallest m with lipschitz / (8 m) <= budget
    return max(1, math.ceil(lipschitz / (8 * budget)))


class IndicatorApprox:
    """``1 - prod_rows(1 - prod_factors u) - offset``, with lazy monomial expansion."""

    def __init__(self, n: int, arity: int, rows, offset: Fraction, error: Fraction,
                 escalations: int = 0):
        self.n = n
        self.arity = arity
        # rows: list of (constant_zero: bool, [(coord index, BernsteinFactor)])
        self.rows = rows
        self.offset = offset
        self.error = error
        self.escalations = escalations
        self._poly = None
        self._lock = threading.Lock()
        self._cache: Dict[Tuple[int, Fraction], Fraction] = {}

    @property
    def degrees(self):
        return [[f.degree for _, f in factors] for factors in self.rows]

    def _factor_value(self, idx: int, f: BernsteinFactor, x: Fraction) -> Fraction:
        key = (id(f), x)
        v = self._cache.get(key)
        if v is None:
            v = f.evaluate(x)
            self._cache[key] = v
        return v

    def evaluate(self, x: Sequence) -> Fraction:
        if len(x) != self.arity:
            raise ValueError("expected %d coordinates" % self.arity)
        x = [as_rational(v) for v in x]
        miss = ONE
        for factors in self.rows:
            prod = ONE
            for idx, f in factors:
                prod *= self._factor_value(idx, f, x[idx])
            miss *= 1 - prod
        return 1 - miss - self.offset

    __call__ = evaluate

    @property
    def polynomial(self) -> Polynomial:
        with self._lock:
            if self._poly is None:
                self._poly = self._expand()
            return self._poly

    def _expand(self) -> Polynomial:
        k = self.arity
        one = Polynomial.constant(k, 1)
        products = []
        for factors in self.rows:
            prod = one
            for idx, f in factors:
                prod = prod * f.polynomial(k, idx)
            products.append(prod)
        if len(products) == 1:
            body = products[0]
        else:
            miss = one
            for prod in products:
                miss = miss * (one - prod)
            body = one - miss
        return body - Polynomial.constant(k, self.offset)


def _build(n: int, rows, offset_mode: str) -> IndicatorApprox:
    rows = [tuple(r) for r in rows]
    k = len(rows[0])
    if n == 1:
        return IndicatorApprox(1, k, [], ZERO, ZERO)
    w = Fraction(1, n)
    budget_total = Fraction(1, 2 * n)
    live = []
    for row in rows:
        if any(s.is_empty() for s in row):
            continue
        live.append([(i, s) for i, s in enumerate(row) if not s.is_full()])
    if any(not factors for factors in live):
        # some product is all of [0,1]^k: the indicator is the constant 1
        offset = Fraction(1, n) if offset_mode == "urysohn" else ZERO
        return IndicatorApprox(n, k, [[]], offset, ZERO)
    count = sum(len(f) for f in live)
    escalations = 0
    scale = 1
    while True:
        built = []
        error = ZERO
        for factors in live:
            out = []
            for i, s in factors:
                L = derivative_lipschitz(s, w)
                m = _degree_for(L, budget_total / count) * scale
                f = _factor_cache(s, w, m)
                error += f.error
                out.append((i, f))
            built.append(out)
        if error <= budget_total:
            break
        escalations += 1
        scale *= 2
        if escalations > 8:
            raise RuntimeError("Bernstein certification failed; this is a bug")
    offset = Fraction(1, n) if offset_mode == "urysohn" else error
    if not built:
        # indicator is identically zero: p = -offset
        return IndicatorApprox(n, k, [], offset, error, escalations)
    return IndicatorApprox(n, k, built, offset, error, escalations)


_FACTORS: Dict[tuple, BernsteinFactor] = {}
_FACTOR_LOCK = threading.Lock()


def _factor_cache(s: OpenIntervalSet, w: Fraction, m: int) -> BernsteinFactor:
    key = (s, w, m)
    with _FACTOR_LOCK:
        f = _FACTORS.get(key)
    if f is None:
        f = BernsteinFactor(s, w, m)
        with _FACTOR_LOCK:
            _FACTORS.setdefault(key, f)
    return f


def bernstein_under(f: Urysohn) -> IndicatorApprox:
    """Certified polynomial within ``1/(2n)`` of the Urysohn function ``f``."""
    return _build(f.n, f.rows, "urysohn")


_ARRAY: Dict[tuple, IndicatorApprox] = {}
_ARRAY_LOCK = threading.Lock()


def indicator_approx(n: int, rows) -> IndicatorApprox:
    """Member ``n`` of the lower-approximating array for a union of products.

    The certified Bernstein error is subtracted (instead of the Urysohn
    offset 1/n), which keeps every property of the array and halves the
    constant loss.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    key = (n, tuple(tuple(r) for r in rows))
    with _ARRAY_LOCK:
        hit = _ARRAY.get(key)
    if hit is None:
        hit = _build(n, key[1], "array")
        with _ARRAY_LOCK:
            _ARRAY.setdefault(key, hit)
    return hit


def indicator_poly(n: int, sigma: Sequence[OpenIntervalSet]) -> IndicatorApprox:
    """``p_{n, sigma}`` for a product of algebra sets."""
    return indicator_approx(n, [tuple(sigma)])


def constraint_rows(C) -> List[Tuple[OpenIntervalSet, ...]]:
    """The sets ``prod_j (c_ij, 2)`` whose union is the widened up-set of ``C``."""
    return [tuple(OpenIntervalSet(((as_rational(c), HIGH),)) for c in row) for row in C]


def indicator_poly_for_constraints(n: int, C) -> IndicatorApprox:
    return indicator_approx(n, constraint_rows(C))
