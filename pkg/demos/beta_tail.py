"""
Recovering a Beta tail from an urn
==================================

A Polya urn started with one red and one black ball is exchangeable, and its
long-run red frequency is uniform on [0, 1].  We ask for Pr(theta > c) using
nothing but the urn's finite-dimensional marginals.
"""

from fractions import Fraction

from definetti import DeFinettiQuery, ProcessSpec, as_marginal_oracle, definetti_lower
from definetti.intervals import parse_set

urn = as_marginal_oracle(ProcessSpec("polya", alpha=Fraction(1), beta=Fraction(1)))

# the weight the directing measure puts on (1/2, 1] is theta itself
heads = (parse_set("(1/2,1]"),)

for c in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
    query = DeFinettiQuery(heads, [[c]])
    column = [definetti_lower(urn, query, fuel) for fuel in range(1, 13)]
    print("Pr(theta > %s) = %s" % (c, 1 - c))
    for fuel, v in enumerate(column, 1):
        print("  fuel %2d  >= %.6f" % (fuel, v))

# the bounds only ever go up and never pass the true value
