from pycwl.windows.invisible import *
from pycwl.windows.residues import *
from pycwl.windows.window import *

__all__ = [
    'WindowSpec',
    'visible',
    'z_count_direct',
    'z_count_mobius',
    'ResiduePair',
    'SplitSets',
    'residue_pair',
    'split_sets',
    'phi',
    'phi_bound',
    'phi_histogram',
    'crt',
    'invisible_primes',
    'find_invisible_window',
]
