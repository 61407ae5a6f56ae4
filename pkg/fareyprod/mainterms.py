"""Main/remainder splits of ln F̄ₙ and ordₚ(F̄ₙ).

Every split cuts the Möbius sum Σ_k μ(k)·h(⌊n/k⌋) at K = ⌊n/(L+1)⌋ with
L = ⌊√n⌋: the k ≤ K terms go to the main term, and the tail k > K is
regrouped by ℓ = ⌊n/k⌋ ≤ L with weights M(⌊n/ℓ⌋) − M(⌊n/(ℓ+1)⌋).

The p-adic terms are carried as integers scaled by (p−1) and only turned
into Fractions at the edge, so ord = Φ + R̄ is checked with no tolerance.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from sympy import isprime

from .accumulate import EPS, accumulation_bound
from .config_handler import get_default
from .exceptions import CrossCheckError, DomainError
from .products import log_f_with_bound, log_g_exact, ord_f_inversion, ord_g
from .radix import digit_sum, digit_summatory
from .sieves import (
    SieveTables,
    binomial_count,
    chebyshev_psi,
    mertens,
    mobius_block_sum,
    phi_summatory,
)

logger = logging.getLogger(__name__)

Kind = Literal["mikolas", "inf", "p0", "p1", "p2"]
P_ADIC_KINDS: Dict[str, int] = {"p0": 0, "p1": 1, "p2": 2}


@dataclass(frozen=True)
class SplitParams:
    n: int
    L: int
    K: int

    @classmethod
    def for_n(cls, n: int) -> "SplitParams":
        if n < 1:
            raise DomainError(f"n must be positive, got {n}")
        L = isqrt(n)
        return cls(n=n, L=L, K=n // (L + 1))

    def matches_piecewise(self) -> bool:
        """K = m−1 on m² ≤ n < m(m+1) and K = m on m(m+1) ≤ n < (m+1)²"""
        m = isqrt(self.n)
        expected = m - 1 if self.n < m * (m + 1) else m
        return self.K == expected and self.K <= self.L


# ---------------------------------------------------------------- the real place


def mikolas_main(n: int, t: SieveTables) -> float:
    """Φ(n) − ψ(n)/2"""
    return phi_summatory(t, n) - chebyshev_psi(t, n) / 2


def mikolas_remainder(n: int, t: SieveTables) -> float:
    """R_F(n) = ln F̄ₙ − Φ(n) + ψ(n)/2"""
    if n < 2:
        raise DomainError(f"the Mikolás remainder needs n ≥ 2, got {n}")
    t.check_range(n)
    return log_f_with_bound(n, t)[0] - mikolas_main(n, t)


def phi_inf_1(n: int, t: SieveTables) -> int:
    """Σ_k μ(k)·Φ*(⌊n/k⌋), exact (it equals Φ(n))"""
    t.check_range(n)
    return mobius_block_sum(t, n, binomial_count)


def _log_g_excess(v: int) -> float:
    return log_g_exact(v) - binomial_count(v)


def _phi_inf_2_terms(n: int, t: SieveTables) -> List[float]:
    params = SplitParams.for_n(n)
    return [
        int(t.mu[k]) * _log_g_excess(n // k) for k in range(1, params.K + 1) if t.mu[k]
    ]


def phi_inf_2(n: int, t: SieveTables) -> float:
    """Σ_{k≤K} μ(k)·(ln Ḡ_{⌊n/k⌋} − Φ*(⌊n/k⌋))"""
    t.check_range(n)
    return math.fsum(_phi_inf_2_terms(n, t))


def _r_inf_terms(n: int, t: SieveTables) -> List[float]:
    params = SplitParams.for_n(n)
    terms = []
    for ell in range(1, params.L + 1):
        weight = mertens(t, n // ell) - mertens(t, n // (ell + 1))
        if weight:
            terms.append(weight * _log_g_excess(ell))
    return terms


def r_inf(n: int, t: SieveTables, check: bool = True) -> float:
    """R̄_∞(n) from the ℓ ≤ L regrouping, checked against ln F̄ₙ − Φ_∞,1 − Φ_∞,2"""
    t.check_range(n)
    terms = _r_inf_terms(n, t)
    value = math.fsum(terms)
    if not check:
        return value

    log_value, log_bound = log_f_with_bound(n, t)
    phi1 = phi_inf_1(n, t)
    main_terms = _phi_inf_2_terms(n, t)
    phi2 = math.fsum(main_terms)
    direct = log_value - phi1 - phi2

    peak = max([abs(x) for x in terms + main_terms] + [1.0])
    tolerance = 16 * (
        log_bound
        + accumulation_bound(len(terms) + len(main_terms), peak)
        + EPS * (abs(log_value) + phi1 + abs(phi2))
    ) + 1e-9 * max(1.0, abs(log_value))
    if abs(direct - value) > tolerance:
        raise CrossCheckError(
            f"R̄_∞({n}): regrouped sum {value!r} and ln F̄ₙ − Φ_∞ = {direct!r} "
            f"differ by more than {tolerance:.3g}"
        )
    return value


# ---------------------------------------------------------------- p-adic splits


def _check_kind(j: int, p: int) -> None:
    if j not in (0, 1, 2):
        raise DomainError(f"p-adic split tag must be 0, 1 or 2, got {j}")
    if not isprime(p):
        raise DomainError(f"{p} is not prime")


def _scaled_term(j: int, p: int) -> Callable[[int], int]:
    """(p−1)-scaled summand: 0 → (p−1)·ordₚ(Ḡ_m), 1 → 2Sₚ(m), 2 → −(m−1)dₚ(m)"""
    if j == 0:
        return lambda m: (p - 1) * ord_g(p, m)
    if j == 1:
        return lambda m: 2 * digit_summatory(p, m)
    return lambda m: -(m - 1) * digit_sum(p, m)


def _head_sum(n: int, t: SieveTables, term: Callable[[int], int]) -> int:
    params = SplitParams.for_n(n)
    return sum(int(t.mu[k]) * term(n // k) for k in range(1, params.K + 1) if t.mu[k])


def phi_p_scaled(j: int, p: int, n: int, t: SieveTables) -> int:
    """(p−1)·Φ_{p,j}(n) as an exact integer"""
    _check_kind(j, p)
    t.check_range(n)
    if j == 0:
        return _head_sum(n, t, _scaled_term(0, p))
    # Φ_{p,1} keeps the full d-sum and the head of the S-sum; Φ_{p,2} the reverse
    if j == 1:
        full, head = _scaled_term(2, p), _scaled_term(1, p)
    else:
        full, head = _scaled_term(1, p), _scaled_term(2, p)
    return mobius_block_sum(t, n, full) + _head_sum(n, t, head)


def phi_p(j: int, p: int, n: int, t: SieveTables) -> Fraction:
    return Fraction(phi_p_scaled(j, p, n, t), p - 1)


def r_p_scaled(j: int, p: int, n: int, t: SieveTables, check: bool = True) -> int:
    """(p−1)·R̄_{p,j}(n) from the ℓ ≤ L regrouping"""
    _check_kind(j, p)
    t.check_range(n)
    term = _scaled_term(j, p)
    params = SplitParams.for_n(n)
    total = 0
    for ell in range(1, params.L + 1):
        weight = mertens(t, n // ell) - mertens(t, n // (ell + 1))
        if weight:
            total += weight * term(ell)
    if check:
        expected = (p - 1) * ord_f_inversion(p, n, t) - phi_p_scaled(j, p, n, t)
        if total != expected:
            raise CrossCheckError(
                f"R̄_{{{p},{j}}}({n}): regrouped sum {total}/{p - 1} "
                f"disagrees with ord − Φ = {expected}/{p - 1}"
            )
    return total


def r_p(j: int, p: int, n: int, t: SieveTables, check: bool = True) -> Fraction:
    return Fraction(r_p_scaled(j, p, n, t, check=check), p - 1)


# ---------------------------------------------------------------- series


@dataclass(frozen=True, eq=False)
class SplitSeries:
    kind: Kind
    prime: Optional[int]
    n_range: Tuple[int, int]
    main: np.ndarray
    remainder: np.ndarray
    # p-adic kinds: remainder = remainder_num / denominator exactly
    remainder_num: Optional[List[int]] = None
    denominator: int = 1

    @property
    def exact(self) -> bool:
        return self.remainder_num is not None

    def header(self) -> List[str]:
        base = ["n", "main", "remainder"]
        return base + ["remainder_num", "denominator"] if self.exact else base

    def rows(self) -> List[list]:
        lo = self.n_range[0]
        out = []
        for i in range(len(self.main)):
            row = [lo + i, float(self.main[i]), float(self.remainder[i])]
            if self.remainder_num is not None:
                row += [self.remainder_num[i], self.denominator]
            out.append(row)
        return out


def split_series(
    kind: Kind, n_range: Tuple[int, int], t: SieveTables, p: Optional[int] = None
) -> SplitSeries:
    lo, hi = n_range
    if lo < 1 or hi < lo:
        raise DomainError(f"invalid n range [{lo}, {hi}]")
    if kind == "mikolas" and lo < 2:
        raise DomainError("the Mikolás split starts at n = 2")
    t.check_range(hi)
    ns = range(lo, hi + 1)
    logger.debug("split series %s over [%d, %d]", kind, lo, hi)

    if kind == "mikolas":
        main = np.array([mikolas_main(n, t) for n in ns])
        remainder = np.array([mikolas_remainder(n, t) for n in ns])
        return SplitSeries(kind, None, n_range, main, remainder)
    if kind == "inf":
        main = np.array([phi_inf_1(n, t) + phi_inf_2(n, t) for n in ns])
        remainder = np.array([r_inf(n, t) for n in ns])
        return SplitSeries(kind, None, n_range, main, remainder)

    if kind not in P_ADIC_KINDS:
        raise DomainError(f"unknown split kind {kind!r}")
    if p is None:
        raise DomainError(f"split kind {kind!r} needs a prime")
    j = P_ADIC_KINDS[kind]
    main_num = [phi_p_scaled(j, p, n, t) for n in ns]
    remainder_num = [r_p_scaled(j, p, n, t) for n in ns]
    return SplitSeries(
        kind,
        p,
        n_range,
        np.array(main_num, dtype=np.float64) / (p - 1),
        np.array(remainder_num, dtype=np.float64) / (p - 1),
        remainder_num=remainder_num,
        denominator=p - 1,
    )


# ---------------------------------------------------------------- jumps


@dataclass
class JumpReport:
    prime: int
    n_limit: int
    threshold_inf: float
    threshold_p: float
    jumps_inf: List[int] = field(default_factory=list)
    jumps_p: List[int] = field(default_factory=list)
    common: List[int] = field(default_factory=list)
    ratios: List[float] = field(default_factory=list)
    median_ratio: float = float("nan")
    # n, Δ R̄_∞, Δ(−R̄_{p,1}), μ(m) when n = m(m+1) else 0
    rows: List[list] = field(default_factory=list)

    HEADER = ["n", "delta_inf", "delta_p1", "mu_m"]


def _threshold(deltas: np.ndarray, factor: float) -> float:
    moving = np.abs(deltas[deltas != 0])
    return factor * float(np.median(moving)) if moving.size else math.inf


def _pronic_mu(n: int, t: SieveTables) -> int:
    m = isqrt(n)
    return int(t.mu[m]) if m * (m + 1) == n else 0


def jump_correlation_report(
    p: int, n_limit: int, t: SieveTables, factor: Optional[float] = None
) -> JumpReport:
    """Compare the jump points of R̄_∞ and −R̄_{p,1} over 1 ≤ n ≤ n_limit"""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if n_limit < 2:
        raise DomainError(f"n_limit must be at least 2, got {n_limit}")
    t.check_range(n_limit)
    if factor is None:
        factor = float(get_default("jump_threshold_factor"))

    ns = range(1, n_limit + 1)
    inf_values = np.array([r_inf(n, t, check=False) for n in ns])
    p_values = np.array([-r_p_scaled(1, p, n, t, check=False) / (p - 1) for n in ns])
    delta_inf = np.diff(inf_values)
    delta_p = np.diff(p_values)

    report = JumpReport(
        prime=p,
        n_limit=n_limit,
        threshold_inf=_threshold(delta_inf, factor),
        threshold_p=_threshold(delta_p, factor),
    )
    # delta index i is the step from n = i+1 to n = i+2
    report.jumps_inf = (np.nonzero(np.abs(delta_inf) > report.threshold_inf)[0] + 2).tolist()
    report.jumps_p = (np.nonzero(np.abs(delta_p) > report.threshold_p)[0] + 2).tolist()
    report.common = sorted(set(report.jumps_inf) & set(report.jumps_p))
    report.ratios = [abs(delta_p[n - 2]) / abs(delta_inf[n - 2]) for n in report.common]
    if report.ratios:
        report.median_ratio = float(np.median(report.ratios))

    for n in sorted(set(report.jumps_inf) | set(report.jumps_p)):
        report.rows.append(
            [n, float(delta_inf[n - 2]), float(delta_p[n - 2]), _pronic_mu(n, t)]
        )
    logger.debug(
        "jumps p=%d: %d common of %d/%d, median ratio %.4g",
        p,
        len(report.common),
        len(report.jumps_inf),
        len(report.jumps_p),
        report.median_ratio,
    )
    return report
