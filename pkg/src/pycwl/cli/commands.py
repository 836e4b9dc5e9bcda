"""One handler per CLI command. A handler turns a RunConfig into an Output:
the JSON payload plus the rows of its CSV rendering. """
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Any, Callable, Dict, List, Optional, Sequence

from pycwl.cli.config import RunConfig
from pycwl.cli.serialize import rounded_percent
from pycwl.cli.verify import first_failure, run_suite, suite_summary
from pycwl.correlation.pairs import rho_grid, rho_lower_bound
from pycwl.correlation.sums import (
    a_n_normalized, avg_correlation, second_moment, variance_ratio
)
from pycwl.empirical.convergence import (
    convergence_report, dirichlet_error_constant
)
from pycwl.empirical.densities import (
    empirical_density_shifted, total_variation
)
from pycwl.empirical.scan import ScanConfig, empirical_pmf
from pycwl.limitdist.distribution import (
    factorial_moment, mean, pgf_eval, pmf, poisson_tv_distance,
    zero_probability
)
from pycwl.limitdist.xi import support_upper
from pycwl.numtheory.arith import (
    cesaro_sum, delta_one, direct_gcd_box_sums, dirichlet_convolve, identity,
    mobius_fraction_table, table, upsilon_exact
)
from pycwl.numtheory.certified import constants, zeta_even
from pycwl.numtheory.primes import gcd_conv, primorial
from pycwl.settings import DEFAULT_BUDGET
from pycwl.typings import CheckFailure, DomainError
from pycwl.windows.invisible import find_invisible_window, invisible_primes
from pycwl.windows.window import z_count_direct, z_count_mobius

logger = logging.getLogger(__name__)


@dataclass
class Output():
    payload: Dict[str, Any]
    columns: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)
    failure: Optional[CheckFailure] = None
    """Set when the command ran to completion but a check did not pass."""


Handler = Callable[[RunConfig], Output]

_handlers: Dict[str, Handler] = {}


def command(name: str) -> Callable[[Handler], Handler]:
    def register(handler: Handler) -> Handler:
        _handlers[name] = handler
        return handler

    return register


def handler_of(name: str) -> Handler:
    return _handlers[name]


def _require(cfg: RunConfig, flag: str) -> int:
    value = getattr(cfg, flag)
    if value is None:
        raise DomainError(f"{cfg.command} needs --{flag}")
    return value


def _pmf_feasible(M: int) -> bool:
    return primorial(M)**2 <= DEFAULT_BUDGET.phi_pairs


@command('pmf')
def cmd_pmf(cfg: RunConfig) -> Output:
    M = _require(cfg, 'M')
    dist = pmf(M, cfg.eps, cfg.threads, bits=cfg.precision_bits)
    entries, rows = [], []
    for r, (value, reason) in enumerate(zip(dist.pmf, dist.exact_zero)):
        lo, hi = value.decimal()
        percent = rounded_percent(value, reason)
        entries.append({
            'r': r,
            'lo': lo,
            'hi': hi,
            'exact_zero': reason,
            'rounded_percent': percent,
        })
        rows.append((r, lo, hi, reason, percent))
    payload = {
        'command': 'pmf',
        'M': M,
        'eps': cfg.eps,
        'trunc_prime': dist.trunc_prime,
        'tail_bound': dist.tail_bound,
        'precision_bits': dist.precision_bits,
        'support_upper': dist.support_upper,
        'total': dist.total,
        'pmf': entries,
    }
    return Output(payload, ('r', 'lo', 'hi', 'exact_zero', 'rounded_percent'),
                  rows)


@command('pgf')
def cmd_pgf(cfg: RunConfig) -> Output:
    M = _require(cfg, 'M')
    z = Fraction(str(_require(cfg, 'z')))
    value = pgf_eval(M, z, cfg.eps, bits=cfg.precision_bits)
    lo, hi = value.decimal()
    payload = {'command': 'pgf', 'M': M, 'z': z, 'eps': cfg.eps,
               'value': value}
    return Output(payload, ('M', 'z', 'lo', 'hi'), [(M, z, lo, hi)])


@command('moments')
def cmd_moments(cfg: RunConfig) -> Output:
    M = _require(cfg, 'M')
    feasible = _pmf_feasible(M)
    quantities: Dict[str, Any] = {
        'mean': mean(M, cfg.eps, cross_check=feasible),
        'second_moment': second_moment(M, cfg.eps),
        'variance_ratio': variance_ratio(M, cfg.eps),
    }
    factorial: List[Dict[str, Any]] = []
    if feasible:
        for s in range(support_upper(M) + 1):
            factorial.append({'s': s,
                              'value': factorial_moment(M, s, cfg.eps)})
        zero, poisson_zero = zero_probability(M, cfg.eps)
        quantities['zero_probability'] = zero
        quantities['poisson_zero_probability'] = poisson_zero
        quantities['poisson_tv_distance'] = poisson_tv_distance(M, cfg.eps)
    rows = [(name, *value.decimal()) for name, value in quantities.items()]
    rows += [(f"factorial_moment[{entry['s']}]", *entry['value'].decimal())
             for entry in factorial]
    payload = {'command': 'moments', 'M': M, 'eps': cfg.eps}
    payload.update(quantities)
    payload['factorial_moments'] = factorial
    return Output(payload, ('quantity', 'lo', 'hi'), rows)


@command('corr')
def cmd_corr(cfg: RunConfig) -> Output:
    N = cfg.N or 16
    grid = rho_grid(N, cfg.eps)
    lower = rho_lower_bound(cfg.eps)
    cells, rows = [], []
    minimum = None
    for dx in range(N):
        for dy in range(N):
            value = grid[dx][dy]
            lo, hi = value.decimal()
            g = gcd_conv(dx, dy)
            cells.append({'dx': dx, 'dy': dy, 'gcd': g, 'lo': lo, 'hi': hi})
            rows.append((dx, dy, g, lo, hi))
            if minimum is None or value.mid < minimum[2].mid:
                minimum = (dx, dy, value)
            if not value.within(lower.lo_fraction, 1):
                raise RuntimeError(
                    f"rho({dx}, {dy}) = {value} outside [{lower}, 1]"
                )
    assert minimum is not None
    payload = {
        'command': 'corr',
        'N': N,
        'eps': cfg.eps,
        'lower_bound': lower,
        'minimum': {'dx': minimum[0], 'dy': minimum[1], 'value': minimum[2]},
        'grid': cells,
    }
    return Output(payload, ('dx', 'dy', 'gcd', 'lo', 'hi'), rows)


@command('avg-corr')
def cmd_avg_corr(cfg: RunConfig) -> Output:
    N = _require(cfg, 'N')
    average = avg_correlation(N, cfg.eps)
    normalized = a_n_normalized(N, cfg.eps)
    payload = {
        'command': 'avg-corr',
        'N': N,
        'eps': cfg.eps,
        'avg_correlation': average,
        'normalized_a_n': normalized,
    }
    rows = [('avg_correlation', *average.decimal()),
            ('normalized_a_n', *normalized.decimal())]
    return Output(payload, ('quantity', 'lo', 'hi'), rows)


@command('constants')
def cmd_constants(cfg: RunConfig) -> Output:
    c = constants(cfg.eps)
    quantities = {
        'inv_zeta2': c.inv_zeta2,
        'feller_tornier': c.feller_tornier,
        'inv_zeta2_f': c.inv_zeta2_f,
        'zeta2': zeta_even(1, cfg.eps),
    }
    payload: Dict[str, Any] = {'command': 'constants', 'eps': cfg.eps}
    payload.update(quantities)
    rows = [(name, *value.decimal()) for name, value in quantities.items()]
    return Output(payload, ('constant', 'lo', 'hi'), rows)


def _convergence(cfg: RunConfig) -> Output:
    assert cfg.check is not None
    grid = cfg.grid or ((cfg.n, ) if cfg.n else (100, 1000))
    report = convergence_report(cfg.check, grid, cfg.threads)
    payload: Dict[str, Any] = {
        'command': 'empirical',
        'check': cfg.check,
        'rows': report,
    }
    if cfg.check == 'dirichlet':
        payload['error_constant'] = dirichlet_error_constant(report)
    rows = [(row.n, row.value, row.reference, row.gap) for row in report]
    return Output(payload, ('n', 'value', 'reference', 'gap'), rows)


@command('empirical')
def cmd_empirical(cfg: RunConfig) -> Output:
    if cfg.check is not None:
        return _convergence(cfg)
    M = _require(cfg, 'M')
    n = _require(cfg, 'n')
    scan = empirical_pmf(M, ScanConfig(n, cfg.threads, cfg.seed))
    frequencies = scan.frequencies
    counts = []
    rows = []
    for r in range(M * M + 1):
        count = scan.counts.get(r, 0)
        frequency = frequencies.get(r, Fraction(0))
        counts.append({'r': r, 'count': count, 'frequency': float(frequency),
                       'standard_error': scan.standard_error(r)})
        rows.append((r, count, float(frequency), scan.standard_error(r)))
    payload: Dict[str, Any] = {
        'command': 'empirical',
        'M': M,
        'n': n,
        'total': scan.total,
        'sampled': scan.sampled,
        'counts': counts,
    }
    if _pmf_feasible(M):
        limit = dict(enumerate(pmf(M, cfg.eps, cfg.threads).midpoints))
        payload['tv_to_limit'] = total_variation(frequencies, limit)
    return Output(payload, ('r', 'count', 'frequency', 'standard_error'),
                  rows)


@command('shifted-density')
def cmd_shifted_density(cfg: RunConfig) -> Output:
    n = _require(cfg, 'n')
    density = empirical_density_shifted(cfg.k, cfg.l, n, cfg.threads)
    reference = constants(cfg.eps).inv_zeta2
    payload = {
        'command': 'shifted-density',
        'k': cfg.k,
        'l': cfg.l,
        'n': n,
        'density': density,
        'density_float': float(density),
        'limit': reference,
        'gap': abs(float(density) - reference.mid),
    }
    return Output(payload, ('k', 'l', 'n', 'density', 'gap'),
                  [(cfg.k, cfg.l, n, density, payload['gap'])])


@command('invisible')
def cmd_invisible(cfg: RunConfig) -> Output:
    M = _require(cfg, 'M')
    window, modulus = find_invisible_window(M)
    primes = invisible_primes(M)
    direct, mobius = z_count_direct(window), z_count_mobius(window)
    if direct or mobius:
        raise RuntimeError(f"{window} has Z = {direct} / {mobius}")
    assert modulus == prod(p for row in primes for p in row)
    payload = {
        'command': 'invisible',
        'M': M,
        'a': window.a,
        'b': window.b,
        'modulus': modulus,
        'primes': primes,
        'z_count': direct,
    }
    return Output(payload, ('M', 'a', 'b', 'modulus', 'z_count'),
                  [(M, window.a, window.b, modulus, direct)])


CESARO_FUNCTIONS = (
    ('delta_one', delta_one),
    ('upsilon', upsilon_exact),
    ('identity', identity),
)


@command('cesaro')
def cmd_cesaro(cfg: RunConfig) -> Output:
    L = cfg.limit or 50
    mu = mobius_fraction_table(L)
    entries, rows = [], []
    failure = None
    for name, f in CESARO_FUNCTIONS:
        h = dirichlet_convolve(table(f, L), mu, L)
        direct = direct_gcd_box_sums(f, L)
        mismatches = 0
        for A in range(1, L + 1):
            for B in range(A, L + 1):
                cesaro = cesaro_sum(h, A, B)
                if cesaro == direct[A][B]:
                    continue
                mismatches += 1
                if failure is None:
                    failure = CheckFailure(
                        'cesaro', f"f={name}, A={A}, B={B}: "
                        f"{cesaro} != {direct[A][B]}"
                    )
        cesaro = cesaro_sum(h, L, L)
        entries.append({'f': name, 'cesaro': cesaro, 'direct': direct[L][L],
                        'boxes': L * (L + 1) // 2, 'mismatches': mismatches,
                        'equal': mismatches == 0})
        rows.append((name, cesaro, direct[L][L], mismatches, mismatches == 0))
    payload = {'command': 'cesaro', 'limit': L, 'sums': entries}
    return Output(payload, ('f', 'cesaro', 'direct', 'mismatches', 'equal'),
                  rows, failure)


@command('verify')
def cmd_verify(cfg: RunConfig) -> Output:
    results = run_suite(cfg)
    payload = {
        'command': 'verify',
        'suite': cfg.suite,
        'summary': suite_summary(results),
        'checks': results,
    }
    rows = [(r.check, r.status, r.detail) for r in results]
    return Output(payload, ('check', 'status', 'detail'), rows,
                  first_failure(results))


__all__ = ['Output', 'command', 'handler_of']
