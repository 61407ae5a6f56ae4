"""Brute-force ground truth for small n.

Nothing here touches the sieve or digit modules: fractions are enumerated
directly and prime exponents are taken by repeated division.
"""

import logging
import math
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .accumulate import CompensatedSum
from .config_handler import get_default
from .exceptions import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FareyFraction:
    h: int
    k: int

    def __post_init__(self) -> None:
        if not 1 <= self.h <= self.k:
            raise DomainError(f"{self.h}/{self.k} is not in (0, 1]")
        if math.gcd(self.h, self.k) != 1:
            raise DomainError(f"{self.h}/{self.k} is not reduced")

    def __str__(self) -> str:
        return f"{self.h}/{self.k}"


def _check_ceiling(n: int, ceiling: Optional[int]) -> None:
    limit = ceiling if ceiling is not None else int(get_default("oracle_ceiling"))
    if not 1 <= n <= limit:
        raise DomainError(f"oracle needs 1 <= n <= {limit}, got {n}")


def _valuation(p: int, x: int) -> int:
    count = 0
    while x % p == 0:
        x //= p
        count += 1
    return count


def _compare(a: FareyFraction, b: FareyFraction) -> int:
    lhs, rhs = a.h * b.k, b.h * a.k
    return (lhs > rhs) - (lhs < rhs)


def _reduced_pairs(k: int) -> Iterator[int]:
    return (h for h in range(1, k + 1) if math.gcd(h, k) == 1)


def enumerate_farey(n: int, ceiling: Optional[int] = None) -> List[FareyFraction]:
    """Reduced fractions h/k, 1 ≤ h ≤ k ≤ n, in increasing order"""
    _check_ceiling(n, ceiling)
    fractions = [FareyFraction(h, k) for k in range(1, n + 1) for h in _reduced_pairs(k)]
    return sorted(fractions, key=cmp_to_key(_compare))


# ---------------------------------------------------------------- reduced fractions


def _ord_f_by_denominator(p: int, n: int) -> np.ndarray:
    """contributions[k] = Σ_{h ≤ k, (h,k)=1} (ordₚ(k) − ordₚ(h))"""
    contributions = np.zeros(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        vk = _valuation(p, k)
        contributions[k] = sum(vk - _valuation(p, h) for h in _reduced_pairs(k))
    return contributions


def oracle_ord_f(p: int, n: int, ceiling: Optional[int] = None) -> int:
    _check_ceiling(n, ceiling)
    return int(_ord_f_by_denominator(p, n).sum())


def oracle_ord_f_series(p: int, n_limit: int, ceiling: Optional[int] = None) -> np.ndarray:
    """ordₚ(F̄ₙ) for n = 0..n_limit from one pass over the denominators"""
    _check_ceiling(n_limit, ceiling)
    logger.debug("oracle ord_%d(F̄ₙ) series up to %d", p, n_limit)
    return np.cumsum(_ord_f_by_denominator(p, n_limit))


def _log_f_by_denominator(n: int) -> List[float]:
    return [
        math.fsum(math.log(k) - math.log(h) for h in _reduced_pairs(k)) for k in range(1, n + 1)
    ]


def oracle_log_f(n: int, ceiling: Optional[int] = None) -> float:
    """−Σ ln(h/k) over the enumeration"""
    _check_ceiling(n, ceiling)
    return math.fsum(_log_f_by_denominator(n))


def oracle_log_f_series(n_limit: int, ceiling: Optional[int] = None) -> np.ndarray:
    _check_ceiling(n_limit, ceiling)
    acc = CompensatedSum()
    return np.array([0.0] + [acc.add(x) for x in _log_f_by_denominator(n_limit)])


# ---------------------------------------------------------------- all pairs h ≤ k


def _ord_g_by_denominator(p: int, n: int) -> np.ndarray:
    contributions = np.zeros(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        vk = _valuation(p, k)
        contributions[k] = sum(vk - _valuation(p, h) for h in range(1, k + 1))
    return contributions


def oracle_ord_g(p: int, n: int, ceiling: Optional[int] = None) -> int:
    """ordₚ(Ḡₙ) summed over every pair h ≤ k ≤ n"""
    _check_ceiling(n, ceiling)
    return int(_ord_g_by_denominator(p, n).sum())


def oracle_ord_g_series(p: int, n_limit: int, ceiling: Optional[int] = None) -> np.ndarray:
    _check_ceiling(n_limit, ceiling)
    return np.cumsum(_ord_g_by_denominator(p, n_limit))


def oracle_unreduced_log(n: int, ceiling: Optional[int] = None) -> float:
    """ln Ḡₙ = −Σ ln(h/k) over every pair h ≤ k ≤ n"""
    _check_ceiling(n, ceiling)
    return math.fsum(
        math.log(k) - math.log(h) for k in range(1, n + 1) for h in range(1, k + 1)
    )


# ---------------------------------------------------------------- digits and grouping


def naive_digit_summatory(b: int, n: int) -> int:
    """Σ_{j<n} d_b(j) by extracting every digit"""
    if b < 2:
        raise DomainError(f"base must be at least 2, got {b}")
    total = 0
    for j in range(n):
        while j:
            total += j % b
            j //= b
    return total


def group_by_gcd(n: int, ceiling: Optional[int] = None) -> Dict[int, List[Tuple[int, int]]]:
    """Reduce every pair h ≤ k ≤ n by g = gcd(h, k); group g holds the reduced pairs"""
    _check_ceiling(n, ceiling)
    groups: Dict[int, List[Tuple[int, int]]] = {}
    for k in range(1, n + 1):
        for h in range(1, k + 1):
            g = math.gcd(h, k)
            groups.setdefault(g, []).append((h // g, k // g))
    return {g: sorted(pairs) for g, pairs in sorted(groups.items())}
