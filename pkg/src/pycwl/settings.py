"""Resource ceilings and numeric defaults. """
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Budget():
    """Resource ceilings shared by the budgeted operations. """
    phi_pairs: int = 25_000_000
    """Largest P_M^2 that `phi_histogram` enumerates."""
    scan_cells: int = 100_000_000
    """Largest n^2 scanned exhaustively; larger scans are sampled."""
    scan_samples: int = 1_000_000
    """Base points drawn by a sampled scan."""
    gcd_terms: int = 100_000_000
    """Largest N^2 gcd evaluations in quadratic correlation sums."""
    trunc_prime: int = 10_000_000
    """Largest truncation prime of a certified Euler product."""
    crt_side: int = 16
    """Largest side length handled by the invisible-window construction."""


DEFAULT_BUDGET = Budget()

DEFAULT_EPS = 1e-10
"""Default enclosure width for certified values."""

ZETA_TERMS = 8
"""Number of zeta factors ζ(2), ..., ζ(2K) split off an Euler tail."""


def precision_bits(M: int) -> int:
    """Starting working precision for side length M."""
    return max(64, 4 * M * M)


def max_precision_bits(M: int) -> int:
    """Ceiling for precision escalation at side length M."""
    return max(256, 16 * M * M)


__all__ = [
    'Budget',
    'DEFAULT_BUDGET',
    'DEFAULT_EPS',
    'ZETA_TERMS',
    'precision_bits',
    'max_precision_bits',
]
