from pycwl.empirical.convergence import *
from pycwl.empirical.densities import *
from pycwl.empirical.scan import *

__all__ = [
    'ScanConfig',
    'EmpiricalPmf',
    'empirical_pmf',
    'conditional_pmf',
    'empirical_density_shifted',
    'empirical_pair_expectation',
    'gcd_value_frequency',
    'residue_joint_frequency',
    'total_variation',
    'ConvergenceRow',
    'convergence_report',
    'dirichlet_error_constant',
    'registered_checks',
]
