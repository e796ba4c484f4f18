"""
Moments in, probabilities out
=============================

Two small round trips.  First, the moments 1/(k+1) of Lebesgue measure are
turned into lower bounds on the mass of an interval.  Second, a directing
measure is pushed forward to the probability of a box for the sequence.
"""

from fractions import Fraction

from definetti import MeasureSpec, as_mu_oracle, chi_from_mu, dist_from_moments, uniform_moments
from definetti.intervals import parse_set

middle = (parse_set("(1/4,3/4)"),)
lebesgue = uniform_moments(1)
for fuel in (2, 4, 8, 12, 16):
    print("mass of (1/4,3/4) from moments, fuel %2d: >= %.4f" % (fuel, dist_from_moments(lebesgue, middle, fuel)))

# Beta(2, 1) coins: Pr(X1 = 1, X2 = 1) = E theta^2 = 1/2
mu = as_mu_oracle(MeasureSpec("beta_bernoulli", alpha=Fraction(2), beta=Fraction(1)))
both_heads = (parse_set("(1/2,1]"), parse_set("(1/2,1]"))
for fuel in (4, 8, 16, 24):
    print("Pr(heads, heads) from the measure, fuel %2d: >= %.4f" % (fuel, chi_from_mu(mu, both_heads, fuel)))
