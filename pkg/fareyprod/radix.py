"""Base-b digit statistics: d_b(n), S_b(n) = Σ_{j<n} d_b(j) and Delange's periodic function."""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .exceptions import DomainError

# int64 headroom for the array forms: S_b(n) ≤ n·(b−1)·log_b n
ARRAY_N_LIMIT = 10**15


def _check_base(b: int) -> None:
    if b < 2:
        raise DomainError(f"base must be at least 2, got {b}")


def _check_nonnegative(n: int) -> None:
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")


def digit_sum(b: int, n: int) -> int:
    """d_b(n): sum of the base-b digits of n, d_b(0) = 0"""
    _check_base(b)
    _check_nonnegative(n)
    total = 0
    while n:
        n, r = divmod(n, b)
        total += r
    return total


def digit_summatory(b: int, n: int) -> int:
    """S_b(n) = Σ_{j=0}^{n−1} d_b(j) in O(log n).

    For the digit position with place value q, the digits of 0..n−1 run
    through complete cycles of length q·b (each contributing q·b(b−1)/2)
    followed by one partial cycle.
    """
    _check_base(b)
    _check_nonnegative(n)
    total = 0
    q = 1
    cycle_sum = b * (b - 1) // 2
    while q <= n:
        cycle = q * b
        full, rem = divmod(n, cycle)
        top, tail = divmod(rem, q)
        total += full * q * cycle_sum + q * top * (top - 1) // 2 + tail * top
        q = cycle
    return total


def delange_f_empirical(b: int, n: int) -> float:
    """f_b(log_b n) = S_b(n)/n − ((b−1)/2)·log_b n"""
    _check_base(b)
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return digit_summatory(b, n) / n - (b - 1) / 2 * (math.log(n) / math.log(b))


def delange_c0(b: int) -> float:
    """Constant Fourier coefficient of Delange's function, (b−1)/(2 ln b)·(ln 2π − 1) − (b+1)/4"""
    _check_base(b)
    return (b - 1) / (2 * math.log(b)) * (math.log(2 * math.pi) - 1) - (b + 1) / 4


def digit_tables(b: int, n_limit: int) -> Tuple[np.ndarray, np.ndarray]:
    """Arrays d_b(0..n_limit) and S_b(0..n_limit) for sweeps"""
    _check_base(b)
    _check_nonnegative(n_limit)
    if n_limit > ARRAY_N_LIMIT:
        raise DomainError(f"n_limit={n_limit} exceeds the int64 guard {ARRAY_N_LIMIT}")
    digits = np.zeros(n_limit + 1, dtype=np.int64)
    rest = np.arange(n_limit + 1, dtype=np.int64)
    while rest.any():
        digits += rest % b
        rest //= b
    summatory = np.zeros(n_limit + 1, dtype=np.int64)
    summatory[1:] = np.cumsum(digits[:-1])
    return digits, summatory


@dataclass(frozen=True)
class DigitStats:
    """Digit statistics bound to one base"""

    base: int

    def __post_init__(self) -> None:
        _check_base(self.base)

    def digit_sum(self, n: int) -> int:
        return digit_sum(self.base, n)

    def summatory(self, n: int) -> int:
        return digit_summatory(self.base, n)

    def delange_f(self, n: int) -> float:
        return delange_f_empirical(self.base, n)

    def delange_c0(self) -> float:
        return delange_c0(self.base)
