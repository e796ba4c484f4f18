"""
From a stateful urn to a stateless sampler
==========================================

The urn updates its ball counts after every draw.  The transform finds a
directing measure instead: draw theta once, then flip independent
theta-coins.  Both samplers should agree on every pattern probability.
"""

from collections import Counter
from fractions import Fraction

from definetti import ProcessSpec, transform
from definetti.processes import SamplerState, directing_sampler, polya_marginal, sample_sequence

urn = ProcessSpec("polya", alpha=Fraction(3, 2), beta=Fraction(5, 2))
result = transform(urn)
print(result.measure, "| status:", result.status, "| verified to depth", result.verified_depth)

trials = 20000
stateful = Counter()
stateless = Counter()
for seed in range(trials):
    stateful["".join(map(str, sample_sequence(SamplerState(urn, seed), 3)))] += 1
    flip = directing_sampler(result.measure, seed)
    stateless["".join(str(flip()) for _ in range(3))] += 1

print("pattern  exact     urn       theta-coins")
for pattern in sorted(stateful):
    exact = polya_marginal(urn.alpha, urn.beta, pattern)
    print("%s      %.4f    %.4f    %.4f" % (pattern, exact, stateful[pattern] / trials,
                                             stateless[pattern] / trials))
