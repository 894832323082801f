"""Noise stability, restrictions and half-space correlation on the cube and in Gaussian space."""

from .fourier_core import (BooleanFunction, FourierSpectrum, NoiseParam, load_table, noise_operator,
                           noise_stability, save_table, var_pt, level1_weight, wht, wht_inverse)
from .halfspace_bool import (CorrelationResult, HalfSpace, covariance_with_halfspace, exact_M,
                             heuristic_M, is_separable)
from .restrictions import (Restriction, RestrictionLaw, apply_restriction, expected_restricted_w1,
                           restriction_expectation, restriction_time)

__version__ = "0.1.0"
