import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fareyprod.exceptions import DomainError
from fareyprod.oracle import naive_digit_summatory
from fareyprod.radix import (
    DigitStats,
    delange_c0,
    delange_f_empirical,
    digit_sum,
    digit_summatory,
    digit_tables,
)


def test_digit_sum():
    assert digit_sum(10, 1234) == 10
    assert digit_sum(2, 255) == 8
    assert digit_sum(3, 0) == 0


def test_digit_summatory_small_values():
    assert digit_summatory(10, 9) == 36
    assert digit_summatory(4, 4) == 6
    assert digit_summatory(2, 8) == 12
    assert digit_summatory(7, 0) == 0
    assert digit_summatory(7, 1) == 0


@given(st.integers(min_value=2, max_value=16), st.integers(min_value=0, max_value=3000))
def test_closed_form_matches_naive_summation(b, n):
    assert digit_summatory(b, n) == naive_digit_summatory(b, n)


def test_summatory_at_full_blocks():
    # every digit position cycles evenly over 0..b^k − 1
    for b in (2, 3, 10):
        for k in range(1, 6):
            assert digit_summatory(b, b**k) == k * b ** (k - 1) * b * (b - 1) // 2


def test_bad_arguments():
    with pytest.raises(DomainError):
        digit_sum(1, 5)
    with pytest.raises(DomainError):
        digit_summatory(10, -1)
    with pytest.raises(DomainError):
        delange_f_empirical(2, 0)
    with pytest.raises(DomainError):
        DigitStats(1)


def test_delange_c0_values():
    assert delange_c0(2) == pytest.approx(-0.14560, abs=1e-5)
    assert delange_c0(3) == pytest.approx(-0.23732, abs=1e-4)


@pytest.mark.parametrize("b, k", [(2, 14), (3, 9)])
def test_log_uniform_mean_of_delange_function(b, k):
    lo, hi = b**k, b ** (k + 1)
    weighted = math.fsum(delange_f_empirical(b, n) / n for n in range(lo, hi))
    weight = math.fsum(1 / n for n in range(lo, hi))
    assert weighted / weight == pytest.approx(delange_c0(b), abs=1e-3)


def test_digit_tables_agree_with_scalars():
    digits, summatory = digit_tables(3, 500)
    assert digits.tolist() == [digit_sum(3, n) for n in range(501)]
    assert summatory.tolist() == [digit_summatory(3, n) for n in range(501)]


def test_digit_tables_guard():
    with pytest.raises(DomainError):
        digit_tables(2, 10**16)


def test_digit_stats_binds_base():
    stats = DigitStats(10)
    assert stats.digit_sum(99) == 18
    assert stats.summatory(10) == 45
    assert stats.delange_c0() == delange_c0(10)
    assert stats.delange_f(100) == delange_f_empirical(10, 100)
