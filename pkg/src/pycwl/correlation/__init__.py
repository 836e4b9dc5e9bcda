from pycwl.correlation.pairs import *
from pycwl.correlation.sums import *

__all__ = [
    'PairOffsets',
    'pair_expectation',
    'rho',
    'rho_of_gcd',
    'rho_lower_bound',
    'with_constants',
    'rho_grid',
    'UpsilonLinear',
    'a_n_sum',
    'a_n_sum_direct',
    'a_n_normalized',
    'offset_gcd_weights',
    'second_moment',
    'variance_ratio',
    'avg_correlation',
    'concentration_bound',
    'upsilon_weighted_average',
]
