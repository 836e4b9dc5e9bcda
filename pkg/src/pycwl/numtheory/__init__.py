from pycwl.numtheory.arith import *
from pycwl.numtheory.certified import (
    CertifiedValue, Constants, EulerProduct, constants, euler_product_tail,
    working_precision, zeta_even
)
from pycwl.numtheory.primes import *

__all__ = [
    'PrimeTable',
    'sieve_primes',
    'mobius',
    'gcd_conv',
    'primorial',
    'radical',
    'upsilon',
    'upsilon_star_mu',
    'table',
    'dirichlet_convolve',
    'cesaro_sum',
    'dirichlet_series_partial',
    'CertifiedValue',
    'Constants',
    'EulerProduct',
    'constants',
    'euler_product_tail',
    'working_precision',
    'zeta_even',
]
