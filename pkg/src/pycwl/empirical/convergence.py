"""Registered finite-n probes of limit statements.

Each probe maps n to (value at n, limiting value). Reports only measure the
gap; what counts as converged is left to the caller.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Tuple

from pycwl.correlation.pairs import PairOffsets
from pycwl.empirical.densities import (
    empirical_density_shifted, empirical_pair_expectation,
    gcd_value_frequency, residue_joint_frequency, total_variation
)
from pycwl.empirical.scan import ScanConfig, empirical_pmf
from pycwl.limitdist.distribution import pmf
from pycwl.numtheory.certified import constants
from pycwl.typings import DomainError

Probe = Callable[[int, int], Tuple[float, float]]

REFERENCE_EPS = 1e-12

_probes: Dict[str, Probe] = {}


def convergence_check(name: str) -> Callable[[Probe], Probe]:
    def register(probe: Probe) -> Probe:
        _probes[name] = probe
        return probe

    return register


def registered_checks() -> List[str]:
    return sorted(_probes)


@dataclass(frozen=True)
class ConvergenceRow():
    n: int
    value: float
    reference: float
    gap: float


@convergence_check('dirichlet')
def _dirichlet(n: int, threads: int) -> Tuple[float, float]:
    value = empirical_density_shifted(0, 0, n, threads)
    return float(value), constants(REFERENCE_EPS).inv_zeta2.mid


@convergence_check('pmf-tv-2')
def _pmf_tv(n: int, threads: int) -> Tuple[float, float]:
    empirical = empirical_pmf(2, ScanConfig(n, threads))
    limit = dict(enumerate(pmf(2).midpoints))
    return total_variation(empirical.frequencies, limit), 0.0


@convergence_check('pair-expectation-1')
def _pair_expectation(n: int, threads: int) -> Tuple[float, float]:
    value = empirical_pair_expectation(PairOffsets(0, 0, 1, 0), n, threads)
    return float(value), constants(REFERENCE_EPS).feller_tornier.mid


@convergence_check('gcd-frequency-2')
def _gcd_frequency(n: int, threads: int) -> Tuple[float, float]:
    value = gcd_value_frequency(2, n, threads)
    return float(value), constants(REFERENCE_EPS).inv_zeta2.mid / 4


@convergence_check('class-frequency-3')
def _class_frequency(n: int, threads: int) -> Tuple[float, float]:
    # P_3 = 2: the class of (even, even) base points
    return float(residue_joint_frequency([2], [(0, 0)], n)), 0.25


def convergence_report(quantity: str,
                       n_grid: Iterable[int],
                       threads: int = 1) -> List[ConvergenceRow]:
    """Value, limit and gap of a registered probe along increasing n. """
    if quantity not in _probes:
        raise DomainError(
            f"unknown check {quantity!r}; known: {registered_checks()}"
        )
    probe = _probes[quantity]
    rows = []
    for n in sorted(set(n_grid)):
        value, reference = probe(n, threads)
        rows.append(ConvergenceRow(n, value, reference, abs(value - reference)))
    return rows


def dirichlet_error_constant(report: Iterable[ConvergenceRow]) -> float:
    """Smallest C with gap <= C log(n)/n along the report. """
    return max((row.gap * row.n / math.log(row.n)
                for row in report if row.n >= 2), default=0.0)


__all__ = [
    'ConvergenceRow',
    'convergence_check',
    'convergence_report',
    'dirichlet_error_constant',
    'registered_checks',
]
