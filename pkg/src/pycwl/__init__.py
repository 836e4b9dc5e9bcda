from pycwl.correlation import a_n_sum, avg_correlation, rho, variance_ratio
from pycwl.limitdist import mean, pgf_eval, pmf, xi
from pycwl.numtheory import constants
from pycwl.windows import (
    WindowSpec, find_invisible_window, z_count_direct, z_count_mobius
)

__all__ = [
    'WindowSpec',
    'z_count_direct',
    'z_count_mobius',
    'find_invisible_window',
    'xi',
    'pmf',
    'pgf_eval',
    'mean',
    'rho',
    'a_n_sum',
    'avg_correlation',
    'variance_ratio',
    'constants',
]
