"""Arithmetic prefix tables: φ, μ, Mertens M, Λ, ψ and Φ up to a bound n_max.

Every other module reads these tables; they are immutable after
:func:`build_tables` returns, so a single instance can be shared freely.
Arrays are indexed directly by k (index 0 holds the neutral value).
"""

import logging
import math
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterator, List, Optional, Tuple, Union

import numpy as np

from .accumulate import compensated_prefix_sums
from .config_handler import get_default
from .exceptions import DomainError

logger = logging.getLogger(__name__)

# Φ(n) ~ 3n²/π² must fit a signed 64-bit integer
INT64_N_MAX = 10**8

THREE_OVER_PI_SQUARED = 3.0 / math.pi**2


@dataclass(frozen=True, eq=False)
class SieveTables:
    n_max: int
    phi: np.ndarray
    mu: np.ndarray
    mertens: np.ndarray
    phi_sum: np.ndarray
    psi: np.ndarray
    lambda_ispp: np.ndarray  # base prime p when k = p^m, else 0
    spf: np.ndarray
    primes: np.ndarray

    def check_range(self, n: int, lower: int = 1) -> None:
        if not lower <= n <= self.n_max:
            raise DomainError(f"n={n} outside the table range [{lower}, {self.n_max}]")

    def primes_up_to(self, n: int) -> np.ndarray:
        return self.primes[: int(np.searchsorted(self.primes, n, side="right"))]

    def is_prime(self, k: int) -> bool:
        return 2 <= k <= self.n_max and int(self.spf[k]) == k

    def distinct_prime_factors(self, k: int) -> List[int]:
        factors: List[int] = []
        while k > 1:
            p = int(self.spf[k])
            factors.append(p)
            while k % p == 0:
                k //= p
        return factors


def _smallest_prime_factors(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, isqrt(n_max) + 1):
        if spf[p] == 0:
            multiples = spf[p * p :: p]
            multiples[multiples == 0] = p
    unmarked = np.nonzero(spf[2:] == 0)[0] + 2
    spf[unmarked] = unmarked
    if n_max >= 1:
        spf[1] = 1
    return spf


def build_tables(n_max: int, ceiling: Optional[int] = None) -> SieveTables:
    """Sieve φ, μ, Λ and their prefix sums up to n_max"""
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    limit = ceiling if ceiling is not None else int(get_default("n_max_ceiling"))
    limit = min(limit, INT64_N_MAX)
    if n_max > limit:
        raise DomainError(
            f"n_max={n_max} exceeds the configured ceiling {limit} "
            "(set n_max_ceiling / FAREY_N_MAX_CEILING; about 9 words per entry are needed)"
        )
    logger.debug("building sieve tables up to %d", n_max)

    spf = _smallest_prime_factors(n_max)
    primes = np.nonzero(spf[2:] == np.arange(2, n_max + 1))[0] + 2

    phi = np.arange(n_max + 1, dtype=np.int64)
    mu = np.ones(n_max + 1, dtype=np.int64)
    mu[0] = 0
    ispp = np.zeros(n_max + 1, dtype=np.int64)
    for p in primes.tolist():
        step = phi[p::p]
        step -= step // p
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
        q = p
        while q <= n_max:
            ispp[q] = p
            q *= p

    mertens = np.cumsum(mu)
    phi_sum = np.cumsum(phi)

    positions = np.nonzero(ispp)[0]
    psi = np.zeros(n_max + 1, dtype=np.float64)
    psi[positions] = compensated_prefix_sums(np.log(ispp[positions].astype(np.float64)).tolist())
    psi = np.maximum.accumulate(psi)

    for arr in (phi, mu, mertens, phi_sum, psi, ispp, spf, primes):
        arr.setflags(write=False)
    return SieveTables(
        n_max=n_max,
        phi=phi,
        mu=mu,
        mertens=mertens,
        phi_sum=phi_sum,
        psi=psi,
        lambda_ispp=ispp,
        spf=spf,
        primes=primes,
    )


def phi_summatory(t: SieveTables, n: int) -> int:
    """Φ(n) = Σ_{k≤n} φ(k), the number of positive Farey fractions of order n"""
    t.check_range(n)
    return int(t.phi_sum[n])


def totient_remainder(t: SieveTables, n: int) -> float:
    """E(n) = Φ(n) − 3n²/π²"""
    t.check_range(n)
    return int(t.phi_sum[n]) - THREE_OVER_PI_SQUARED * n * n


def binomial_count(n: int) -> int:
    """Φ*(n) = n(n+1)/2, the number of unreduced fractions h/k with 1 ≤ h ≤ k ≤ n"""
    return n * (n + 1) // 2


def mertens(t: SieveTables, x: Union[int, float]) -> int:
    """M(⌊x⌋), with M(x) = 0 for x < 1"""
    k = int(math.floor(x))
    if k < 1:
        return 0
    t.check_range(k)
    return int(t.mertens[k])


def von_mangoldt(t: SieveTables, k: int) -> float:
    t.check_range(k)
    p = int(t.lambda_ispp[k])
    return math.log(p) if p else 0.0


def chebyshev_psi(t: SieveTables, n: int) -> float:
    if n < 1:
        return 0.0
    t.check_range(n)
    return float(t.psi[n])


def floor_blocks(n: int, k_min: int = 1) -> Iterator[Tuple[int, int, int]]:
    """Yield (v, k_lo, k_hi): maximal runs k_lo ≤ k ≤ k_hi with ⌊n/k⌋ = v"""
    k = max(k_min, 1)
    while k <= n:
        v = n // k
        hi = n // v
        yield v, k, hi
        k = hi + 1


def mobius_block_sum(t: SieveTables, n: int, f: Callable[[int], int], k_min: int = 1) -> int:
    """Σ_{k_min ≤ k ≤ n} μ(k)·f(⌊n/k⌋), one f evaluation per distinct quotient"""
    total = 0
    for v, lo, hi in floor_blocks(n, k_min):
        weight = int(t.mertens[hi]) - int(t.mertens[lo - 1])
        if weight:
            total += weight * f(v)
    return total


def mobius_invert_steps(values: np.ndarray, t: SieveTables) -> np.ndarray:
    """Return F with values[n] = Σ_ℓ F[⌊n/ℓ⌋] for 1 ≤ n < len(values).

    Since ⌊n/ℓ⌋ − ⌊(n−1)/ℓ⌋ is 1 when ℓ | n and 0 otherwise, the first
    differences satisfy ΔF = μ ⋆ ΔG (Dirichlet convolution), which costs
    O(N log N) for the whole range instead of O(N^{3/2}). values[0] is ignored.
    """
    n_limit = len(values) - 1
    t.check_range(max(n_limit, 1))
    steps = np.zeros_like(values)
    if n_limit >= 1:
        steps[1] = values[1]
        steps[2:] = np.diff(values[1:])
    inverted = np.zeros_like(steps)
    squarefree = np.nonzero(t.mu[1 : n_limit + 1])[0] + 1
    for d in squarefree.tolist():
        inverted[d::d] += int(t.mu[d]) * steps[1 : n_limit // d + 1]
    return np.cumsum(inverted)


TABLE_HEADER = ["k", "phi", "mu", "mertens", "phi_sum", "psi"]


def table_rows(t: SieveTables) -> Iterator[list]:
    for k in range(1, t.n_max + 1):
        yield [
            k,
            int(t.phi[k]),
            int(t.mu[k]),
            int(t.mertens[k]),
            int(t.phi_sum[k]),
            float(t.psi[k]),
        ]
