"""Valuations and logarithms of the Farey products F̄ₙ and Ḡₙ.

ordₚ(Ḡₙ) comes from base-p digit statistics, ordₚ(F̄ₙ) from Möbius
inversion over ⌊n/ℓ⌋ (or directly from the numerator/denominator sums),
and the logs from a lazily grown table of ln k!.
"""

import logging
import math
import threading
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from sympy import isprime

from .accumulate import EPS, CompensatedSum, accumulation_bound
from .exceptions import CrossCheckError, DomainError
from .radix import digit_sum, digit_summatory, digit_tables
from .sieves import SieveTables, build_tables, floor_blocks, mobius_block_sum, mobius_invert_steps

logger = logging.getLogger(__name__)

# Glaisher-Kinkelin constant A = exp(1/12 − ζ′(−1))
GLAISHER = 1.2824271291006226
G0 = -0.5 * math.log(2 * math.pi) - 1.0 / 12 + 2 * math.log(GLAISHER)

VALUATION_GUARD = 2**62

Method = Literal["inversion", "direct", "oracle"]
NRange = Tuple[int, int]


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise DomainError(f"{p} is not prime")


def _check_base(b: int) -> None:
    if b < 2:
        raise DomainError(f"base must be at least 2, got {b}")


def _check_positive(n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")


def _check_range(n_range: NRange) -> None:
    lo, hi = n_range
    if lo < 1 or hi < lo:
        raise DomainError(f"invalid n range [{lo}, {hi}]")


def _tables_for(n: int, t: Optional[SieveTables]) -> SieveTables:
    if t is None:
        return build_tables(max(n, 1))
    t.check_range(max(n, 1))
    return t


def _guard(value: int, what: str) -> int:
    if abs(value) >= VALUATION_GUARD:
        raise CrossCheckError(f"{what} = {value} escapes the 2^62 guard")
    return value


@dataclass(frozen=True, eq=False)
class ValuationSeries:
    """values[i] is the valuation at n = n_range[0] + i"""

    base: int
    n_range: NRange
    values: np.ndarray
    method: Method = "inversion"

    def at(self, n: int) -> int:
        lo, hi = self.n_range
        if not lo <= n <= hi:
            raise DomainError(f"n={n} outside the series range [{lo}, {hi}]")
        return int(self.values[n - lo])

    def rows(self) -> List[list]:
        lo = self.n_range[0]
        return [[lo + i, int(v)] for i, v in enumerate(self.values)]


@dataclass(frozen=True, eq=False)
class LogSeries:
    kind: Literal["logF", "logG"]
    n_range: NRange
    values: np.ndarray
    accumulation_error_bound: float

    def rows(self) -> List[list]:
        lo = self.n_range[0]
        return [
            [lo + i, float(v), self.accumulation_error_bound] for i, v in enumerate(self.values)
        ]


@dataclass(frozen=True)
class LowestTerms:
    """Sizes of F̄ₙ = D̂ₙ/N̂ₙ written in lowest terms"""

    n: int
    log_nhat: float
    log_dhat: float


@dataclass
class PropertyReport:
    prime: int
    n_limit: int
    p1_values: Dict[int, int] = field(default_factory=dict)
    p1_violations: List[int] = field(default_factory=list)
    p1_strict_violations: List[int] = field(default_factory=list)
    p2_values: Dict[int, int] = field(default_factory=dict)
    p2_violations: List[int] = field(default_factory=list)
    positive: int = 0
    negative: int = 0
    zero: int = 0
    p4_max_ratio: float = 0.0
    p4_max_positive: float = 0.0
    p4_min_negative: float = 0.0

    @property
    def total(self) -> int:
        return self.positive + self.negative + self.zero

    def fractions(self) -> Tuple[float, float, float]:
        n = self.total or 1
        return self.positive / n, self.negative / n, self.zero / n


# ---------------------------------------------------------------- Ḡₙ valuations


def _g_valuation(b: int, n: int) -> int:
    numerator = 2 * digit_summatory(b, n) - (n - 1) * digit_sum(b, n)
    value, rest = divmod(numerator, b - 1)
    if rest:
        raise CrossCheckError(f"2·S_{b}({n}) − ({n}−1)·d_{b}({n}) is not divisible by {b - 1}")
    return value


def ord_g(p: int, n: int) -> int:
    """ordₚ(Ḡₙ) = (2·Sₚ(n) − (n−1)·dₚ(n))/(p−1)"""
    _check_prime(p)
    _check_positive(n)
    return _g_valuation(p, n)


def nu_b_g(b: int, n: int) -> int:
    """The same digit formula for any base b ≥ 2"""
    _check_base(b)
    _check_positive(n)
    return _g_valuation(b, n)


def ord_g_table(b: int, n_limit: int) -> np.ndarray:
    """ν_b(Ḡₙ) for n = 0..n_limit (index 0 holds 0)"""
    _check_base(b)
    digits, summatory = digit_tables(b, n_limit)
    n = np.arange(n_limit + 1, dtype=np.int64)
    numerator = 2 * summatory - (n - 1) * digits
    if (numerator % (b - 1)).any():
        raise CrossCheckError(f"digit formula not divisible by {b - 1} somewhere below {n_limit}")
    return numerator // (b - 1)


def ord_g_series(b: int, n_range: NRange) -> ValuationSeries:
    _check_range(n_range)
    lo, hi = n_range
    return ValuationSeries(base=b, n_range=n_range, values=ord_g_table(b, hi)[lo:])


# ---------------------------------------------------------------- logs of Ḡₙ


class _FactorialLogs:
    """ln k! and Σ_{j≤k} ln j!, grown on demand and shared by all callers"""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._fact = CompensatedSum()
        self._cum = CompensatedSum()
        self.log_fact: List[float] = [0.0]
        self.log_fact_cum: List[float] = [0.0]

    def ensure(self, n: int) -> None:
        # log_fact_cum is appended last, so its length marks a complete entry
        if n < len(self.log_fact_cum):
            return
        with self._lock:
            start = len(self.log_fact_cum)
            if n < start:
                return
            logger.debug("extending ln k! table from %d to %d", start - 1, n)
            for k in range(start, n + 1):
                lf = self._fact.add(math.log(k))
                self.log_fact.append(lf)
                self.log_fact_cum.append(self._cum.add(lf))


_FACTORIAL_LOGS = _FactorialLogs()


def log_g_exact(n: int) -> float:
    """ln Ḡₙ = (n+1)·ln n! − 2·Σ_{k≤n} ln k!"""
    _check_positive(n)
    _FACTORIAL_LOGS.ensure(n)
    return (n + 1) * _FACTORIAL_LOGS.log_fact[n] - 2 * _FACTORIAL_LOGS.log_fact_cum[n]


def _log_g_error(n: int) -> float:
    # cancellation between (n+1)·ln n! and 2·Σ ln k!
    _FACTORIAL_LOGS.ensure(n)
    return 4 * EPS * (n + 1) * _FACTORIAL_LOGS.log_fact[n]


def log_g_asymptotic(n: int) -> float:
    """n²/2 − (n/2)ln n + (1 − ln√(2π))n − (1/3)ln n + g₀"""
    _check_positive(n)
    ln_n = math.log(n)
    return (
        n * n / 2
        - n / 2 * ln_n
        + (1 - 0.5 * math.log(2 * math.pi)) * n
        - ln_n / 3
        + G0
    )


def log_g_table(n_limit: int) -> np.ndarray:
    """ln Ḡₙ for n = 0..n_limit (index 0 holds 0)"""
    if n_limit < 1:
        return np.zeros(max(n_limit, 0) + 1)
    _FACTORIAL_LOGS.ensure(n_limit)
    n = np.arange(n_limit + 1, dtype=np.float64)
    fact = np.asarray(_FACTORIAL_LOGS.log_fact[: n_limit + 1])
    cum = np.asarray(_FACTORIAL_LOGS.log_fact_cum[: n_limit + 1])
    return (n + 1) * fact - 2 * cum


def log_g_series(n_range: NRange) -> LogSeries:
    _check_range(n_range)
    lo, hi = n_range
    values = log_g_table(hi)[lo:]
    return LogSeries(
        kind="logG", n_range=n_range, values=values, accumulation_error_bound=_log_g_error(hi)
    )


# ---------------------------------------------------------------- F̄ₙ by inversion


def ord_f_inversion(p: int, n: int, t: SieveTables) -> int:
    """ordₚ(F̄ₙ) = Σ_ℓ μ(ℓ)·ordₚ(Ḡ_{⌊n/ℓ⌋}), one digit evaluation per quotient block"""
    _check_prime(p)
    t.check_range(n)
    total = mobius_block_sum(t, n, lambda v: _g_valuation(p, v))
    return _guard(total, f"ord_{p}(F̄_{n})")


def nu_b_f(b: int, n: int, t: SieveTables) -> int:
    _check_base(b)
    t.check_range(n)
    total = mobius_block_sum(t, n, lambda v: _g_valuation(b, v))
    return _guard(total, f"ν_{b}(F̄_{n})")


def nu_b_f_series(b: int, n_range: NRange, t: SieveTables) -> ValuationSeries:
    """Whole range at once through the difference form of the inversion"""
    _check_base(b)
    _check_range(n_range)
    lo, hi = n_range
    t.check_range(hi)
    values = mobius_invert_steps(ord_g_table(b, hi), t)
    if np.abs(values).max() >= VALUATION_GUARD:
        raise CrossCheckError(f"ν_{b}(F̄ₙ) escapes the 2^62 guard below {hi}")
    return ValuationSeries(base=b, n_range=n_range, values=values[lo:], method="inversion")


def ord_f_series(p: int, n_range: NRange, t: SieveTables) -> ValuationSeries:
    _check_prime(p)
    return nu_b_f_series(p, n_range, t)


# ---------------------------------------------------------------- F̄ₙ from numerator and denominator


def ord_d(p: int, n: int, t: Optional[SieveTables] = None) -> int:
    """ordₚ(Dₙ) = Σ_{b≥1} Σ_{a ≤ n/p^b} φ(a·p^b)"""
    _check_prime(p)
    _check_positive(n)
    t = _tables_for(n, t)
    total = 0
    q = p
    while q <= n:
        total += int(t.phi[q : n + 1 : q].sum())
        q *= p
    return total


def _squarefree_divisors(primes: List[int]) -> List[Tuple[int, int]]:
    """(j, μ(j)) for every squarefree j built from the given primes"""
    divisors = []
    for size in range(len(primes) + 1):
        sign = -1 if size % 2 else 1
        for subset in combinations(primes, size):
            divisors.append((math.prod(subset), sign))
    return divisors


def ord_n(p: int, n: int, t: Optional[SieveTables] = None) -> int:
    """ordₚ(Nₙ): for each h = a·p^b count the k in [h, n] coprime to h"""
    _check_prime(p)
    _check_positive(n)
    t = _tables_for(n, t)
    total = 0
    rad_cache: Dict[int, List[Tuple[int, int]]] = {}
    q = p
    while q <= n:
        for a in range(1, n // q + 1):
            h = a * q
            quotient, d = divmod(n, h)
            total += int(t.phi[h]) * (quotient - 1)
            if d == 0:
                continue
            divisors = rad_cache.get(a)
            if divisors is None:
                primes = t.distinct_prime_factors(a)
                if p not in primes:
                    primes.append(p)
                divisors = rad_cache[a] = _squarefree_divisors(primes)
            total += sum(sign * (d // j) for j, sign in divisors)
        q *= p
    return total


def ord_f_direct(p: int, n: int, t: Optional[SieveTables] = None) -> int:
    """ordₚ(Dₙ) − ordₚ(Nₙ)"""
    t = _tables_for(n, t)
    return _guard(ord_d(p, n, t) - ord_n(p, n, t), f"ord_{p}(F̄_{n})")


# ---------------------------------------------------------------- n = p² − 1


def ord_g_psq_term(p: int, k: int) -> int:
    """ordₚ(Ḡ_m) for m = ⌊(p²−1)/k⌋, 1 ≤ k ≤ p−1, from its two base-p digits"""
    _check_prime(p)
    if not 1 <= k <= p - 1:
        raise DomainError(f"k must lie in [1, {p - 1}], got {k}")
    a_k = (p - 1) // k
    b_k = (p * p - 1) // k - p * a_k
    return a_k * (p - 1 - b_k)


def ord_f_psq_closed(p: int, t: Optional[SieveTables] = None) -> int:
    """ordₚ(F̄_{p²−1}) = (p−1) − Σ_{k<p} μ(k)·⌊(p−1)/k⌋·b_k"""
    _check_prime(p)
    if p == 2:
        raise DomainError("the p² − 1 closed form needs an odd prime")
    t = _tables_for(p - 1, t)
    total = 0
    for k in range(1, p):
        a_k = (p - 1) // k
        b_k = (p * p - 1) // k - p * a_k
        total += int(t.mu[k]) * a_k * b_k
    return (p - 1) - total


# ---------------------------------------------------------------- logs of F̄ₙ


def log_f_with_bound(n: int, t: SieveTables) -> Tuple[float, float]:
    """ln F̄ₙ = Σ_ℓ μ(ℓ)·ln Ḡ_{⌊n/ℓ⌋} and its accumulated error bound"""
    t.check_range(n)
    terms: List[float] = []
    error = 0.0
    for v, lo, hi in floor_blocks(n):
        weight = int(t.mertens[hi]) - int(t.mertens[lo - 1])
        if weight:
            terms.append(weight * log_g_exact(v))
            error += abs(weight) * _log_g_error(v)
    peak = max((abs(x) for x in terms), default=0.0)
    return math.fsum(terms), error + accumulation_bound(len(terms), peak)


def log_f(n: int, t: SieveTables) -> float:
    return log_f_with_bound(n, t)[0]


def log_f_series(n_range: NRange, t: SieveTables) -> LogSeries:
    _check_range(n_range)
    lo, hi = n_range
    t.check_range(hi)
    values = mobius_invert_steps(log_g_table(hi), t)
    peak = float(np.abs(values).max())
    bound = _log_g_error(hi) + accumulation_bound(int(hi * max(math.log(hi), 1.0)), peak)
    return LogSeries(
        kind="logF", n_range=n_range, values=values[lo:], accumulation_error_bound=bound
    )


def lowest_terms_logs(n: int, t: SieveTables) -> LowestTerms:
    t.check_range(n)
    numerator: List[float] = []
    denominator: List[float] = []
    for p in t.primes_up_to(n).tolist():
        v = ord_f_inversion(p, n, t)
        if v > 0:
            denominator.append(v * math.log(p))
        elif v < 0:
            numerator.append(-v * math.log(p))
    return LowestTerms(n=n, log_nhat=math.fsum(numerator), log_dhat=math.fsum(denominator))


# ---------------------------------------------------------------- scans


def integer_farey_scan(n_limit: int, t: SieveTables) -> List[int]:
    """All n ≤ n_limit with F̄ₙ an integer (primes above n never divide F̄ₙ)"""
    if n_limit < 1:
        return []
    t.check_range(n_limit)
    integral = np.ones(n_limit + 1, dtype=bool)
    integral[0] = False
    for p in t.primes_up_to(n_limit).tolist():
        series = ord_f_series(p, (1, n_limit), t)
        integral[1:] &= series.values >= 0
    return np.nonzero(integral)[0].tolist()


def property_scan(p: int, n_limit: int, t: SieveTables) -> PropertyReport:
    """Sign and growth statistics of ordₚ(F̄ₙ) for n ≤ n_limit"""
    _check_prime(p)
    if n_limit < 1:
        raise DomainError(f"n_limit must be positive, got {n_limit}")
    series = ord_f_series(p, (1, n_limit), t)
    report = PropertyReport(prime=p, n_limit=n_limit)

    k = 1
    while p**k - 1 <= n_limit:
        v = series.at(p**k - 1)
        report.p1_values[k] = v
        if v > 0:
            report.p1_violations.append(k)
        if k >= 2 and (p, k) != (2, 2) and v >= 0:
            report.p1_strict_violations.append(k)
        if p**k <= n_limit:
            w = series.at(p**k)
            report.p2_values[k] = w
            if w <= 0:
                report.p2_violations.append(k)
        k += 1

    values = series.values
    report.positive = int((values > 0).sum())
    report.negative = int((values < 0).sum())
    report.zero = int((values == 0).sum())
    if n_limit >= 2:
        n = np.arange(2, n_limit + 1, dtype=np.float64)
        ratios = values[1:] / (n * np.log(n) / math.log(p))
        report.p4_max_ratio = float(np.abs(ratios).max())
        report.p4_max_positive = float(max(ratios.max(), 0.0))
        report.p4_min_negative = float(min(ratios.min(), 0.0))
    return report


@dataclass(frozen=True)
class TableRow:
    r: int
    n: int
    ord: int
    ratio: float
    ratio_log: float


def farey_table(p: int, max_power: int, t: SieveTables) -> List[TableRow]:
    """Rows r, N = p^r − 1, ordₚ(F̄_N), −ord/N, −ord/(N·log_p N)"""
    _check_prime(p)
    if max_power < 1:
        raise DomainError(f"max_power must be at least 1, got {max_power}")
    n_top = p**max_power - 1
    series = ord_f_series(p, (1, max(n_top, 1)), t)
    rows = []
    for r in range(1, max_power + 1):
        n = p**r - 1
        value = series.at(n)
        negated = -value
        if n > 1:
            ratio = negated / n
            ratio_log = negated / (n * math.log(n) / math.log(p))
        else:
            ratio = ratio_log = 0.0
        rows.append(TableRow(r=r, n=n, ord=value, ratio=ratio, ratio_log=ratio_log))
    return rows
