from __future__ import annotations

import logging
import math
from typing import List, Sequence, Tuple

from pycwl.numtheory.primes import next_prime
from pycwl.settings import DEFAULT_BUDGET, Budget
from pycwl.typings import BudgetError, DomainError
from pycwl.windows.window import WindowSpec, z_count_direct

logger = logging.getLogger(__name__)


def crt(residues: Sequence[int], moduli: Sequence[int]) -> Tuple[int, int]:
    """The x in [0, m) with x ≡ residues[i] (mod moduli[i]), m the product.

    Raises:
        DomainError: if the moduli are not pairwise coprime.
    """
    if len(residues) != len(moduli):
        raise DomainError("residues and moduli differ in length")
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        if n < 1:
            raise DomainError(f"modulus must be positive, got {n}")
        if math.gcd(m, n) != 1:
            raise DomainError(f"modulus {n} shares a factor with {m}")
        t = ((r - x) * pow(m, -1, n)) % n
        x += m * t
        m *= n
    return x % m, m


def invisible_primes(M: int) -> List[List[int]]:
    """The M^2 smallest primes p >= M, laid out row-major over the frame. """
    primes: List[int] = []
    p = next_prime(max(M, 2))
    while len(primes) < M * M:
        primes.append(p)
        p = next_prime(p + 1)
    return [primes[i * M:(i + 1) * M] for i in range(M)]


def find_invisible_window(
    M: int, budget: Budget = DEFAULT_BUDGET
) -> Tuple[WindowSpec, int]:
    """A window with no visible cell, and the CRT modulus of the
    construction.

    Cell (k, l) gets its own prime p; a ≡ -k and b ≡ -l (mod p) make p divide
    both coordinates.

    Raises:
        RuntimeError: if the constructed window is not fully invisible.
    """
    if M < 2:
        raise DomainError(f"invisible windows need M >= 2, got {M}")
    if M > budget.crt_side:
        raise BudgetError(
            f"invisible window of side {M} exceeds {budget.crt_side}",
            required=M,
            limit=budget.crt_side,
        )
    grid = invisible_primes(M)
    moduli = [p for row in grid for p in row]
    a, modulus = crt([-(i // M + 1) for i in range(M * M)], moduli)
    b, _ = crt([-(i % M + 1) for i in range(M * M)], moduli)
    window = WindowSpec(M, a, b)
    if z_count_direct(window):
        raise RuntimeError(f"constructed window {window} has visible cells")
    logger.debug("invisible window for M=%d: modulus has %d bits", M,
                 modulus.bit_length())
    return window, modulus


__all__ = ['crt', 'invisible_primes', 'find_invisible_window']
