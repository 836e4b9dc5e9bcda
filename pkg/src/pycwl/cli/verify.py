"""Cross-module identity checks run by `cwl verify`.

A check is a class registered with a suite and the checks it depends on.
Registration keeps `Check.topological_order` sorted so that every check runs
after its dependencies; a check whose dependency failed is skipped.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import (
    ClassVar, Dict, Iterable, List, NoReturn, Optional, Set, Type
)

import numpy as np
from mpmath import iv, mp

from pycwl.cli.config import RunConfig
from pycwl.correlation.sums import second_moment
from pycwl.empirical.densities import total_variation
from pycwl.empirical.scan import ScanConfig, empirical_pmf
from pycwl.limitdist.distribution import mean, pmf
from pycwl.limitdist.waring import (
    MembershipMatrix, binomial_moments, direct_distribution,
    exchangeable_distribution, pgf_from_binomial_moments, schuette_nesbitt,
    waring_distribution
)
from pycwl.limitdist.xi import xi
from pycwl.numtheory.arith import (
    cesaro_sum, delta_one, direct_gcd_box_sums, dirichlet_convolve,
    dirichlet_series_partial, identity, mobius_fraction_table, table,
    upsilon_exact, upsilon_star_mu, upsilon_star_mu_table, upsilon_table
)
from pycwl.numtheory.certified import (
    CertifiedValue, constants, euler_product_tail, working_precision,
    zeta_even
)
from pycwl.numtheory.primes import primes_below, primorial
from pycwl.typings import CheckFailure
from pycwl.windows.residues import (
    ResiduePair, phi, residue_pair, split_sets
)
from pycwl.windows.window import WindowSpec, z_count_direct, z_count_mobius

logger = logging.getLogger(__name__)

CORE_M = 3
CORE_N = 2000
CORE_WINDOW_GRID = 60
"""Base points 0..CORE_WINDOW_GRID on each axis in the core suite."""
CORE_TV = 0.05
"""Largest accepted total variation between a scan and the limit law."""
PMF_EPS = 1e-8
CESARO_LIMIT = 100
EVALUATOR_LIMIT = 500
EVALUATOR_SAMPLES = 10_000
WARING_TRIALS = 3
CONSTANTS_EPS = 1e-6


@lru_cache(maxsize=None)
def depend_on(a: Type[Check], b: Type[Check]) -> bool:
    """If a depends on b directly or indirectly."""
    if a == b:
        return True
    return any(depend_on(dep, b) for dep in a.dependencies)


@dataclass(frozen=True)
class CheckResult():
    check: str
    suite: str
    status: str
    """'pass', 'fail' or 'skipped'."""
    detail: str


class Check():
    """Base class for verification checks. """
    name: ClassVar[str] = ''
    suite: ClassVar[str] = ''
    dependencies: ClassVar[Set[Type[Check]]] = set()
    topological_order: ClassVar[List[Type[Check]]] = []

    def __init_subclass__(
        cls,
        suite: Optional[str] = None,
        dependencies: Optional[Iterable[Type[Check]]] = None,
    ):
        if suite is None:
            return
        cls.suite = suite
        cls.dependencies = set(dependencies or ())
        last = -1
        for i, c in enumerate(cls.topological_order):
            if depend_on(cls, c):
                last = i
        cls.topological_order.insert(last + 1, cls)

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    def run(self) -> str:
        """Run the check and describe what was covered. """
        raise NotImplementedError

    def fail(self, counterexample: str) -> NoReturn:
        raise CheckFailure(self.name, counterexample)


def checks_of(suite: str) -> List[Type[Check]]:
    return [c for c in Check.topological_order if c.suite == suite]


def run_suite(cfg: RunConfig) -> List[CheckResult]:
    """Run every check of `cfg.suite` in dependency order. """
    results: List[CheckResult] = []
    passed: Set[Type[Check]] = set()
    for cls in checks_of(cfg.suite):
        if not cls.dependencies <= passed:
            missing = sorted(c.name for c in cls.dependencies - passed)
            results.append(CheckResult(cls.name, cls.suite, 'skipped',
                                       f"needs {', '.join(missing)}"))
            continue
        logger.info("check %s", cls.name)
        try:
            detail = cls(cfg).run()
        except CheckFailure as e:
            logger.warning("check %s failed: %s", cls.name, e.counterexample)
            results.append(CheckResult(cls.name, cls.suite, 'fail',
                                       e.counterexample))
            continue
        passed.add(cls)
        results.append(CheckResult(cls.name, cls.suite, 'pass', detail))
    return results


def first_failure(results: Iterable[CheckResult]) -> Optional[CheckFailure]:
    for result in results:
        if result.status == 'fail':
            return CheckFailure(result.check, result.detail)
    return None


def _rng(cfg: RunConfig) -> np.random.Generator:
    return np.random.default_rng(cfg.seed)


# core


class EvaluatorEquivalence(Check, suite='core'):
    """Direct and Möbius window counts agree on a grid of base points. """
    name = 'evaluator-equivalence'

    def run(self) -> str:
        M = self.cfg.M or CORE_M
        side = self.cfg.limit or CORE_WINDOW_GRID
        for m in range(1, M + 1):
            for a in range(side + 1):
                for b in range(side + 1):
                    w = WindowSpec(m, a, b)
                    direct, mobius = z_count_direct(w), z_count_mobius(w)
                    if direct != mobius:
                        self.fail(f"{w}: direct {direct}, mobius {mobius}")
        return f"M <= {M}, a, b <= {side}"


class PhiSplitSets(Check, suite='core'):
    """Φ_M(u, v) counts the cells no small prime hits, and bounds Z_M. """
    name = 'phi-split-sets'

    def run(self) -> str:
        M = self.cfg.M or CORE_M
        for m in range(1, M + 1):
            P = primorial(m)
            if P * P <= 10_000:
                pairs = [(u, v) for u in range(P) for v in range(P)]
            else:
                rng = _rng(self.cfg)
                pairs = list(zip(rng.integers(0, P, 500).tolist(),
                                 rng.integers(0, P, 500).tolist()))
            for u, v in pairs:
                r = ResiduePair(u, v, m)
                sets = split_sets(r)
                if phi(r) != len(sets.a_set):
                    self.fail(f"{r}: phi {phi(r)}, |A| {len(sets.a_set)}")
        side = CORE_WINDOW_GRID
        for a in range(side + 1):
            for b in range(side + 1):
                w = WindowSpec(M, a, b)
                r = residue_pair(w)
                for k, l in split_sets(r).b_set:
                    if gcd(a + k, b + l) == 1:
                        self.fail(f"{w}: cell ({k}, {l}) in B is visible")
                if z_count_direct(w) > phi(r):
                    self.fail(f"{w}: Z = {z_count_direct(w)} > phi "
                              f"{phi(r)}")
        return f"M <= {M}"


class XiMeanIdentity(Check, suite='core'):
    """ξ(M, 1) = M^2 ∏_{p<M} (1 - 1/p^2). """
    name = 'xi-mean-identity'

    def run(self) -> str:
        M = self.cfg.M or CORE_M
        for m in range(1, M + 1):
            expected = Fraction(m * m)
            for p in primes_below(m):
                expected *= 1 - Fraction(1, p * p)
            if xi(m, 1) != expected:
                self.fail(f"xi({m}, 1) = {xi(m, 1)}, expected {expected}")
        return f"M <= {M}"


class PmfNormalization(Check, suite='core'):
    name = 'pmf-normalization'

    def run(self) -> str:
        M = self.cfg.M or CORE_M
        for m in range(1, M + 1):
            total = pmf(m, PMF_EPS, self.cfg.threads).total
            if not total.contains(1):
                self.fail(f"M={m}: total mass {total} misses 1")
        return f"M <= {M}"


class MeanIdentity(Check, suite='core', dependencies=[PmfNormalization]):
    """Σ r P(Z*_M = r) overlaps M^2/ζ(2). """
    name = 'mean-identity'

    def run(self) -> str:
        M = self.cfg.M or CORE_M
        for m in range(1, M + 1):
            try:
                mean(m, PMF_EPS, cross_check=True)
            except RuntimeError as e:
                self.fail(str(e))
        return f"M <= {M}"


class SecondMomentOverlap(Check, suite='core',
                          dependencies=[PmfNormalization]):
    """F A_M overlaps Σ r^2 P(Z*_M = r). """
    name = 'second-moment-overlap'

    def run(self) -> str:
        M = self.cfg.M or CORE_M
        for m in range(1, M + 1):
            closed = second_moment(m, PMF_EPS)
            summed = pmf(m, PMF_EPS, self.cfg.threads).moment(2)
            if not closed.overlaps(summed):
                self.fail(f"M={m}: F A_M = {closed}, sum = {summed}")
        return f"M <= {M}"


class EmpiricalDistance(Check, suite='core', dependencies=[PmfNormalization]):
    """A finite scan lies close to the limit law in total variation. """
    name = 'empirical-tv'

    def run(self) -> str:
        M = self.cfg.M or CORE_M
        n = self.cfg.n or CORE_N
        scan = empirical_pmf(M, ScanConfig(n, self.cfg.threads, self.cfg.seed))
        limit = dict(enumerate(pmf(M, PMF_EPS, self.cfg.threads).midpoints))
        distance = total_variation(scan.frequencies, limit)
        if distance >= CORE_TV:
            self.fail(f"M={M}, n={n}: TV {distance:.6f} >= {CORE_TV}")
        return f"M={M}, n={n}: TV {distance:.6f}"


# cesaro


class CesaroIdentity(Check, suite='cesaro'):
    """Σ_{i<=A, j<=B} f(gcd(i, j)) = Σ_k (f⋆μ)(k) ⌊A/k⌋ ⌊B/k⌋. """
    name = 'cesaro-identity'

    def run(self) -> str:
        L = self.cfg.limit or CESARO_LIMIT
        mu = mobius_fraction_table(L)
        for label, f in (('delta_one', delta_one), ('upsilon', upsilon_exact),
                         ('identity', identity)):
            h = dirichlet_convolve(table(f, L), mu, L)
            direct = direct_gcd_box_sums(f, L)
            for A in range(1, L + 1):
                for B in range(A, L + 1):
                    cesaro = cesaro_sum(h, A, B)
                    if cesaro != direct[A][B]:
                        self.fail(f"f={label}, A={A}, B={B}: cesaro "
                                  f"{cesaro}, direct {direct[A][B]}")
        return f"A, B <= {L}"


class UpsilonStarMu(Check, suite='cesaro'):
    """The sieved, convolved and closed forms of Υ⋆μ agree. """
    name = 'upsilon-star-mu'

    def run(self) -> str:
        L = self.cfg.limit or CESARO_LIMIT
        convolved = dirichlet_convolve(upsilon_table(L),
                                       mobius_fraction_table(L), L)
        sieved = upsilon_star_mu_table(L)
        for n in range(1, L + 1):
            if not convolved[n] == sieved[n] == upsilon_star_mu(n):
                self.fail(f"n={n}: convolved {convolved[n]}, sieved "
                          f"{sieved[n]}, closed {upsilon_star_mu(n)}")
        return f"n <= {L}"


# waring


def _random_system(rng: np.random.Generator, size: int,
                   t: int) -> MembershipMatrix:
    rows = rng.integers(0, 1 << size, t).tolist()
    return MembershipMatrix(tuple(rows), size)


def _random_weights(rng: np.random.Generator, size: int) -> List[Fraction]:
    raw = rng.integers(1, 20, size).tolist()
    total = sum(raw)
    return [Fraction(w, total) for w in raw]


class WaringBruteForce(Check, suite='waring'):
    """Waring's formula against counting memberships point by point. """
    name = 'waring-brute-force'

    def run(self) -> str:
        rng = _rng(self.cfg)
        trials = self.cfg.limit or WARING_TRIALS
        count = 0
        for size in range(1, 13):
            for t in range(1, 6):
                for _ in range(trials):
                    mm = _random_system(rng, size, t)
                    w = _random_weights(rng, size)
                    if waring_distribution(mm, w) != direct_distribution(mm,
                                                                         w):
                        self.fail(f"rows={mm.rows}, size={size}, "
                                  f"weights={[str(x) for x in w]}")
                    count += 1
        return f"{count} set systems"


class SchuetteNesbitt(Check, suite='waring',
                      dependencies=[WaringBruteForce]):
    """E[z^C] three ways: Schuette-Nesbitt, binomial moments, the law. """
    name = 'schuette-nesbitt'

    def run(self) -> str:
        rng = _rng(self.cfg)
        z = Fraction(1, 3)
        for size in range(1, 13):
            for t in range(1, 6):
                mm = _random_system(rng, size, t)
                w = _random_weights(rng, size)
                law = direct_distribution(mm, w)
                expected = sum((p * z**r for r, p in enumerate(law)),
                               Fraction(0))
                sn = schuette_nesbitt(mm, w, [z**r for r in range(t + 1)])
                pgf = pgf_from_binomial_moments(binomial_moments(mm, w), z)
                if not expected == sn == pgf:
                    self.fail(f"rows={mm.rows}: law {expected}, "
                              f"schuette-nesbitt {sn}, pgf {pgf}")
        return "z = 1/3"


class Exchangeable(Check, suite='waring', dependencies=[WaringBruteForce]):
    """Sets {x : bit j of x} under uniform weights are exchangeable, with
    s-fold intersections of probability 2^-s. """
    name = 'exchangeable'

    def run(self) -> str:
        for t in range(1, 4):
            size = 1 << t
            mm = MembershipMatrix.from_sets(
                [[x for x in range(size) if (x >> j) & 1] for j in range(t)],
                size
            )
            w = [Fraction(1, size)] * size
            alpha = [Fraction(1, 1 << s) for s in range(t + 1)]
            if exchangeable_distribution(t, alpha) != direct_distribution(
                    mm, w):
                self.fail(f"t={t}")
        return "t <= 3"


# evaluators


class EvaluatorGrid(Check, suite='evaluators'):
    """Direct and Möbius counts on every base point of a square grid. """
    name = 'evaluator-grid'

    def run(self) -> str:
        side = self.cfg.limit or EVALUATOR_LIMIT
        M = self.cfg.M or 6
        for m in range(1, M + 1):
            for a in range(side + 1):
                for b in range(side + 1):
                    w = WindowSpec(m, a, b)
                    if z_count_direct(w) != z_count_mobius(w):
                        self.fail(f"{w}: direct {z_count_direct(w)}, "
                                  f"mobius {z_count_mobius(w)}")
        return f"M <= {M}, a, b <= {side}"


class EvaluatorRandom(Check, suite='evaluators'):
    """Direct and Möbius counts on random larger windows. """
    name = 'evaluator-random'

    def run(self) -> str:
        rng = _rng(self.cfg)
        samples = EVALUATOR_SAMPLES
        sides = rng.integers(1, 13, samples).tolist()
        bases = rng.integers(0, 10**6, (samples, 2)).tolist()
        for m, (a, b) in zip(sides, bases):
            w = WindowSpec(m, a, b)
            if z_count_direct(w) != z_count_mobius(w):
                self.fail(f"{w}: direct {z_count_direct(w)}, mobius "
                          f"{z_count_mobius(w)}")
        return f"{samples} windows"


# constants


class QuotedConstants(Check, suite='constants'):
    """1/ζ(2) ≈ 0.6079, F ≈ 0.3226, 1/(ζ(2) F) ≈ 1.88426. """
    name = 'quoted-constants'

    def run(self) -> str:
        eps = min(self.cfg.eps, CONSTANTS_EPS)
        c = constants(eps)
        for label, value, digits, quoted in (
            ('1/zeta(2)', c.inv_zeta2, 4, '0.6079'),
            ('F', c.feller_tornier, 4, '0.3226'),
            ('1/(zeta(2) F)', c.inv_zeta2_f, 5, '1.88426'),
        ):
            if value.width > eps:
                self.fail(f"{label}: width {value.width:.3g} > {eps:.3g}")
            if f"{value.mid:.{digits}f}" != quoted:
                self.fail(f"{label}: {value} does not round to {quoted}")
        return f"eps={eps:g}"


class ZetaFromPi(Check, suite='constants'):
    """ζ(2) and ζ(4) from Bernoulli numbers contain π^2/6 and π^4/90. """
    name = 'zeta-from-pi'

    def run(self) -> str:
        eps = min(self.cfg.eps, CONSTANTS_EPS)
        with working_precision(128):
            references = {1: iv.pi**2 / 6, 2: iv.pi**4 / 90}
        for k, reference in references.items():
            value = zeta_even(k, eps)
            if not value.overlaps(CertifiedValue.from_interval(reference)):
                self.fail(f"zeta({2 * k}) = {value}")
        with mp.workprec(128):
            six_over_pi2 = 6 / mp.pi**2
        if not constants(eps).inv_zeta2.contains(six_over_pi2):
            self.fail(f"1/zeta(2) misses 6/pi^2 = {six_over_pi2}")
        return "zeta(2), zeta(4)"


class TailMethods(Check, suite='constants'):
    """The plain and accelerated Euler tails overlap. """
    name = 'tail-methods'

    def run(self) -> str:
        for M, s in ((1, 1), (2, 2), (3, 4), (4, 9)):
            plain = euler_product_tail(M, s, 1e-4, 'plain')
            fast = euler_product_tail(M, s, 1e-8, 'accelerated')
            if not plain.overlaps(fast):
                self.fail(f"M={M}, s={s}: plain {plain}, accelerated "
                          f"{fast}")
        return "4 products"


class UpsilonSeries(Check, suite='constants', dependencies=[QuotedConstants]):
    """Σ_k (Υ⋆μ)(k)/k^2 approaches 1/(ζ(2)^2 F). """
    name = 'upsilon-series'

    def run(self) -> str:
        K = 10_000
        partial = dirichlet_series_partial(upsilon_star_mu_table(K), 2,
                                           exact=False)
        c = constants(1e-12)
        target = (c.inv_zeta2 * c.inv_zeta2_f).mid
        if abs(partial - target) > 1e-9:
            self.fail(f"K={K}: partial {partial!r}, limit {target!r}")
        return f"K={K}: gap {abs(partial - target):.3g}"


class UpsilonRadical(Check, suite='constants'):
    """Υ depends on n only through its radical. """
    name = 'upsilon-radical'

    def run(self) -> str:
        L = self.cfg.limit or 200
        sieved = upsilon_table(L)
        for n in range(1, L + 1):
            if sieved[n] != upsilon_exact(n):
                self.fail(f"n={n}: sieved {sieved[n]}, closed "
                          f"{upsilon_exact(n)}")
            for p in primes_below(n + 1):
                if n % p == 0 and p * n <= L and \
                        sieved[p * n] != sieved[n]:
                    self.fail(f"Upsilon({p * n}) != Upsilon({n})")
        return f"n <= {L}"


def suite_summary(results: List[CheckResult]) -> Dict[str, int]:
    summary = {'pass': 0, 'fail': 0, 'skipped': 0}
    for result in results:
        summary[result.status] += 1
    return summary


__all__ = [
    'Check',
    'CheckResult',
    'checks_of',
    'run_suite',
    'first_failure',
    'suite_summary',
]
