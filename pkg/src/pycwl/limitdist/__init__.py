from pycwl.limitdist.distribution import *
from pycwl.limitdist.waring import *
from pycwl.limitdist.xi import *

__all__ = [
    'XiTable',
    'xi',
    'xi_table',
    'support_upper',
    'DistTable',
    'pmf',
    'pgf_eval',
    'mean',
    'factorial_moment',
    'poisson_tv_distance',
    'zero_probability',
    'MembershipMatrix',
    'binomial_moments',
    'waring_distribution',
    'direct_distribution',
    'exchangeable_distribution',
    'pgf_from_binomial_moments',
    'schuette_nesbitt',
]
