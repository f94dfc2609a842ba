import logging
import math
from functools import lru_cache
from typing import List, Optional

from engel_lab.config import settings
from engel_lab.exceptions import InvalidElement, RangeCapError
from engel_lab.reporting import CaseTally
from engel_lab.schemas import VerificationReport

logger = logging.getLogger(__name__)

# Rows of Pascal's triangle mod 2, row k stored as a bitmask (bit j = C(k, j) mod 2).
_pascal_rows: List[int] = [1]


@lru_cache(maxsize=None)
def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def _check_args(m: int, n: int, p: int) -> None:
    if m < 0 or n < 0:
        raise InvalidElement(f"binomial arguments must be non-negative, got ({m}, {n})")
    if not _is_prime(p):
        raise InvalidElement(f"modulus {p} is not prime")


def base_p_digits(k: int, p: int) -> List[int]:
    """Base-p digits of k, least significant first (empty for k = 0)."""
    digits = []
    while k:
        k, d = divmod(k, p)
        digits.append(d)
    return digits


def leq_base_p(n: int, m: int, p: int = 2) -> bool:
    """Digitwise order: every base-p digit of n is at most the matching digit of m."""
    _check_args(m, n, p)
    if p == 2:
        return (m & n) == n
    while n:
        n, dn = divmod(n, p)
        m, dm = divmod(m, p)
        if dn > dm:
            return False
    return True


def binom_parity(m: int, n: int, p: int = 2) -> int:
    """1 if p does not divide C(m, n), else 0. For p = 2 this is C(m, n) mod 2."""
    return 1 if leq_base_p(n, m, p) else 0


def binom_mod_p(m: int, n: int, p: int) -> int:
    """C(m, n) mod p as the product of the digit binomials."""
    _check_args(m, n, p)
    result = 1
    while n:
        m, dm = divmod(m, p)
        n, dn = divmod(n, p)
        if dn > dm:
            return 0
        result = result * math.comb(dm, dn) % p
    return result


def binom_parity_oracle(m: int, n: int) -> int:
    """C(m, n) mod 2 from the Pascal recurrence, no digit shortcut."""
    if m < 0 or n < 0:
        raise InvalidElement(f"binomial arguments must be non-negative, got ({m}, {n})")
    cap = settings.PASCAL_ORACLE_CAP
    if m > cap:
        raise RangeCapError(f"Pascal oracle is capped at m <= {cap}, got m = {m}")
    while len(_pascal_rows) <= m:
        row = _pascal_rows[-1]
        _pascal_rows.append(row ^ (row << 1))
    return (_pascal_rows[m] >> n) & 1


def _lucas_row(m: int) -> int:
    # Bits j with j a submask of m.
    row, sub = 0, m
    while True:
        row |= 1 << sub
        if sub == 0:
            return row
        sub = (sub - 1) & m


def check_lucas_oracle(max_m: Optional[int] = None) -> VerificationReport:
    """binom_parity against the Pascal recurrence on every pair 0 <= n <= m <= max_m.

    Rows are compared as bitmasks; only disagreeing pairs are expanded into
    individual failure records.
    """
    max_m = settings.LUCAS_ORACLE_MAX if max_m is None else max_m
    tally = CaseTally("lie", config={"check": "lucas", "max_m": max_m})
    binom_parity_oracle(max_m, 0)
    for m in range(max_m + 1):
        pascal, lucas = _pascal_rows[m], _lucas_row(m)
        if pascal == lucas:
            tally.add_passed(m + 1)
            continue
        for n in range(m + 1):
            tally.check(
                f"lucas[{m},{n}]",
                (pascal >> n & 1) == binom_parity(m, n),
                expected=str(pascal >> n & 1),
                actual=str(binom_parity(m, n)),
            )
    logger.info("Lucas sweep up to m = %d: %d pairs", max_m, tally.total)
    return tally.report()
