import math
from math import isqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fareyprod.exceptions import DomainError
from fareyprod.sieves import (
    TABLE_HEADER,
    binomial_count,
    build_tables,
    chebyshev_psi,
    floor_blocks,
    mertens,
    mobius_block_sum,
    mobius_invert_steps,
    phi_summatory,
    table_rows,
    totient_remainder,
    von_mangoldt,
)


def test_small_totients_and_mobius(tables):
    assert tables.phi[1:11].tolist() == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    assert tables.mu[1:11].tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert phi_summatory(tables, 10) == 32
    assert phi_summatory(tables, 1) == 1


def test_tables_are_read_only(tables):
    with pytest.raises(ValueError):
        tables.phi[3] = 0


def test_totient_remainder(tables):
    assert totient_remainder(tables, 10) == pytest.approx(32 - 300 / math.pi**2)
    assert totient_remainder(tables, 10) == pytest.approx(1.603645, abs=1e-6)


def test_binomial_count():
    assert binomial_count(4) == 10
    assert binomial_count(1) == 1


def test_mertens_floors_its_argument(tables):
    assert mertens(tables, 0.5) == 0
    assert mertens(tables, 0) == 0
    assert mertens(tables, 10) == -1
    assert mertens(tables, 10.9) == -1


def test_von_mangoldt_and_psi(tables):
    assert von_mangoldt(tables, 8) == pytest.approx(math.log(2))
    assert von_mangoldt(tables, 6) == 0.0
    assert chebyshev_psi(tables, 4) == pytest.approx(math.log(12))
    # ψ(n) = ln lcm(1..n)
    assert chebyshev_psi(tables, 10) == pytest.approx(math.log(2520))
    assert chebyshev_psi(tables, 0) == 0.0


def test_psi_is_nondecreasing(tables):
    assert (np.diff(tables.psi) >= 0).all()


def test_prime_helpers(tables):
    assert tables.primes_up_to(20).tolist() == [2, 3, 5, 7, 11, 13, 17, 19]
    assert tables.is_prime(97)
    assert not tables.is_prime(91)
    assert tables.distinct_prime_factors(360) == [2, 3, 5]
    assert tables.distinct_prime_factors(1) == []


def test_build_tables_rejects_bad_bounds():
    with pytest.raises(DomainError):
        build_tables(0)
    with pytest.raises(DomainError):
        build_tables(11, ceiling=10)


def test_config_ceiling_applies(monkeypatch):
    monkeypatch.setenv("FAREY_N_MAX_CEILING", "50")
    with pytest.raises(DomainError, match="ceiling 50"):
        build_tables(51)
    assert build_tables(50).n_max == 50


def test_out_of_range_queries(tables):
    with pytest.raises(DomainError):
        phi_summatory(tables, 0)
    with pytest.raises(DomainError):
        phi_summatory(tables, tables.n_max + 1)


def test_floor_blocks_cover_every_k():
    blocks = list(floor_blocks(10))
    assert blocks == [(10, 1, 1), (5, 2, 2), (3, 3, 3), (2, 4, 5), (1, 6, 10)]


@given(st.integers(min_value=1, max_value=5000))
def test_floor_blocks_partition(n):
    seen = 0
    for v, lo, hi in floor_blocks(n):
        assert lo == seen + 1
        assert n // lo == v == n // hi
        seen = hi
    assert seen == n


def test_mobius_sum_of_floors_is_one(tables):
    for n in range(1, 10_001):
        assert mobius_block_sum(tables, n, lambda v: v) == 1


@settings(max_examples=50)
@given(st.lists(st.integers(min_value=-1000, max_value=1000), min_size=2, max_size=300))
def test_mobius_invert_steps_reconstructs(tables, values):
    g = np.array(values, dtype=np.int64)
    f = mobius_invert_steps(g, tables)
    for n in range(1, len(g)):
        assert sum(int(f[n // ell]) for ell in range(1, n + 1)) == g[n]


def test_table_rows_match_header(tables):
    small = build_tables(12)
    rows = list(table_rows(small))
    assert len(rows) == 12
    assert all(len(row) == len(TABLE_HEADER) for row in rows)
    assert rows[9][:5] == [10, 4, 1, -1, 32]


def test_totients_over_divisors_sum_to_n(tables):
    n_limit = 2000
    divisor_sums = np.zeros(n_limit + 1, dtype=np.int64)
    for d in range(1, n_limit + 1):
        divisor_sums[d::d] += tables.phi[d]
    assert (divisor_sums[1:] == np.arange(1, n_limit + 1)).all()


def _smallest_factor(n):
    return next((q for q in range(2, isqrt(n) + 1) if n % q == 0), n)


def test_psi_matches_trial_division(tables):
    total = 0.0
    for n in range(2, 10_001):
        p = _smallest_factor(n)
        m = n
        while m % p == 0:
            m //= p
        if m == 1:
            total += math.log(p)
        assert chebyshev_psi(tables, n) == pytest.approx(total, rel=1e-9)


def test_totient_remainder_envelope(tables):
    n = np.arange(1, 10_001)
    remainder = tables.phi_sum[1:10_001] - 3 / math.pi**2 * n.astype(float) ** 2
    assert (np.abs(remainder) <= 2 * n * np.log(n + 1)).all()


def test_summatory_steps(tables):
    assert (np.diff(tables.mertens[:10_001]) == tables.mu[1:10_001]).all()
    assert (np.diff(tables.phi_sum[:10_001]) == tables.phi[1:10_001]).all()
