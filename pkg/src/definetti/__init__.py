"""Computable de Finetti measures in exact rational arithmetic."""

from .core import (ContinuityAssumption, DeFinettiQuery, chi_from_mu, definetti_bracket,
                   definetti_lower)
from .intervals import (OpenIntervalSet, complement_of_closure, enumerate_refinements,
                        normalize, parse_set, parse_set_tuple, refines)
from .moments import (MomentOracle, dist_from_moments, integrate_continuous, moments_from_chi,
                      point_mass_moments, uniform_moments)
from .oracles import MarginalOracle, RightOrderOracle, algebra_lower, closed_upper, query_upset
from .polynomials import Polynomial, indicator_poly, q_polynomial, split_signs, urysohn
from .processes import (MeasureSpec, ProcessSpec, SamplerState, as_marginal_oracle, as_mu_oracle,
                        polya_marginal, recognize_beta_bernoulli, sample_sequence)
from .reals import BracketReal, LowerReal, UpperReal, lower_sup, signed_sum
from .transform import transform

__version__ = "0.1.0"
