import math
from fractions import Fraction

import numpy as np
import pytest

from fareyprod.exceptions import CrossCheckError, DomainError
from fareyprod.mainterms import (
    JumpReport,
    SplitParams,
    jump_correlation_report,
    mikolas_main,
    mikolas_remainder,
    phi_inf_1,
    phi_inf_2,
    phi_p,
    phi_p_scaled,
    r_inf,
    r_p,
    r_p_scaled,
    split_series,
)
from fareyprod.products import log_f, ord_f_inversion
from fareyprod.radix import digit_summatory

SQUAREFREE_M = [14, 15, 17, 19, 21, 22, 23, 26, 29, 30, 31, 33, 34, 35, 37, 38]


class TestSplitParams:
    def test_small_values(self):
        assert SplitParams.for_n(1) == SplitParams(n=1, L=1, K=0)
        assert SplitParams.for_n(4) == SplitParams(n=4, L=2, K=1)
        assert SplitParams.for_n(6) == SplitParams(n=6, L=2, K=2)

    def test_piecewise_description(self):
        assert all(SplitParams.for_n(n).matches_piecewise() for n in range(1, 1_000_001))

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            SplitParams.for_n(0)


class TestRealPlace:
    def test_mikolas_values(self, tables):
        assert mikolas_remainder(2, tables) == pytest.approx(1.5 * math.log(2) - 2)
        assert mikolas_remainder(2, tables) == pytest.approx(-0.960279, abs=1e-6)
        assert mikolas_remainder(4, tables) == pytest.approx(-0.88635, abs=1e-5)
        assert mikolas_main(4, tables) == pytest.approx(6 - math.log(12) / 2)

    def test_mikolas_needs_two(self, tables):
        with pytest.raises(DomainError):
            mikolas_remainder(1, tables)

    def test_first_main_term_is_farey_count(self, tables):
        for n in list(range(1, 2001)) + list(range(2001, 10_001, 101)):
            assert phi_inf_1(n, tables) == int(tables.phi_sum[n])

    def test_second_main_term(self, tables):
        assert phi_inf_2(4, tables) == pytest.approx(math.log(96) - 10)
        assert phi_inf_2(1, tables) == 0.0

    def test_second_main_term_asymptotic(self, tables):
        n = 10_000
        assert phi_inf_2(n, tables) / (-n / 2) == pytest.approx(1.17, abs=0.2)

    def test_split_identity(self, tables):
        for n in range(1, 1501, 7):
            total = phi_inf_1(n, tables) + phi_inf_2(n, tables) + r_inf(n, tables)
            assert total == pytest.approx(log_f(n, tables), rel=1e-9, abs=1e-6)

    def test_remainder_at_one(self, tables):
        assert r_inf(1, tables) == pytest.approx(-1.0)

    def test_remainder_envelope(self, tables):
        values = np.array([r_inf(n, tables) for n in range(1, 1501)])
        n = np.arange(1, 1501)
        assert (np.abs(values) <= 1.3 * n**0.75).all()
        assert (np.abs(values[11:]) <= n[11:] ** 0.75).all()

    def test_disagreement_is_reported(self, tables, mocker):
        mocker.patch("fareyprod.mainterms.log_f_with_bound", return_value=(1e9, 0.0))
        with pytest.raises(CrossCheckError):
            r_inf(100, tables)
        assert r_inf(100, tables, check=False) < 1e9


class TestPAdicSplits:
    def test_worked_example(self, tables):
        assert phi_p(0, 3, 8, tables) == -1
        assert r_p(0, 3, 8, tables) == 0

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_every_split_adds_up(self, tables, p):
        for n in range(1, 2001, 11):
            ord_value = ord_f_inversion(p, n, tables)
            for j in (0, 1, 2):
                assert phi_p(j, p, n, tables) + r_p(j, p, n, tables) == ord_value

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_remainders_share_the_tail(self, tables, p):
        for n in range(1, 1001, 9):
            scaled = [r_p_scaled(j, p, n, tables) for j in (0, 1, 2)]
            assert scaled[0] == scaled[1] + scaled[2]

    def test_first_remainder_uses_digit_sums(self, tables):
        n, p = 777, 3
        L = math.isqrt(n)
        mertens = tables.mertens
        expected = sum(
            (int(mertens[n // ell]) - int(mertens[n // (ell + 1)])) * 2 * digit_summatory(p, ell)
            for ell in range(1, L + 1)
        )
        assert r_p(1, p, n, tables) == Fraction(expected, p - 1)

    def test_scaled_values_are_integers(self, tables):
        value = phi_p_scaled(1, 5, 500, tables)
        assert isinstance(value, int)
        assert phi_p(1, 5, 500, tables) == Fraction(value, 4)

    def test_remainder_envelope(self, tables):
        for n in range(1, 1501):
            assert abs(r_p(1, 3, n, tables)) <= 3 * n**0.75

    def test_bad_arguments(self, tables):
        with pytest.raises(DomainError):
            phi_p(3, 3, 10, tables)
        with pytest.raises(DomainError):
            r_p(1, 9, 10, tables)

    def test_disagreement_is_reported(self, tables, mocker):
        mocker.patch("fareyprod.mainterms.ord_f_inversion", return_value=10**6)
        with pytest.raises(CrossCheckError):
            r_p_scaled(1, 3, 100, tables)


class TestSplitSeries:
    def test_mikolas_series(self, tables):
        series = split_series("mikolas", (2, 50), tables)
        assert not series.exact
        assert series.header() == ["n", "main", "remainder"]
        assert series.rows()[2][0] == 4
        assert series.remainder[2] == pytest.approx(-0.88635, abs=1e-5)

    def test_mikolas_starts_at_two(self, tables):
        with pytest.raises(DomainError):
            split_series("mikolas", (1, 50), tables)

    def test_inf_series(self, tables):
        series = split_series("inf", (1, 200), tables)
        for i, n in enumerate(range(1, 201)):
            assert series.main[i] + series.remainder[i] == pytest.approx(log_f(n, tables), abs=1e-6)

    def test_p_adic_series_are_exact(self, tables):
        parts = {kind: split_series(kind, (1, 300), tables, p=3) for kind in ("p0", "p1", "p2")}
        for kind, series in parts.items():
            assert series.exact
            assert series.denominator == 2
            assert series.header()[-2:] == ["remainder_num", "denominator"]
        total = [a + b for a, b in zip(parts["p1"].remainder_num, parts["p2"].remainder_num)]
        assert parts["p0"].remainder_num == total

    def test_p_adic_series_need_a_prime(self, tables):
        with pytest.raises(DomainError):
            split_series("p1", (1, 10), tables)
        with pytest.raises(DomainError):
            split_series("inf", (5, 4), tables)


@pytest.fixture(scope="module")
def jump_reports(tables):
    return {p: jump_correlation_report(p, 1500, tables) for p in (2, 3, 5)}


class TestJumps:
    def test_ratios_fall_with_the_prime(self, jump_reports):
        medians = [jump_reports[p].median_ratio for p in (2, 3, 5)]
        assert medians[0] > medians[1] > medians[2]
        assert medians[1] > 1

    def test_measured_medians(self, jump_reports):
        medians = [jump_reports[p].median_ratio for p in (2, 3, 5)]
        assert medians == pytest.approx([2.12, 1.29, 0.96], rel=0.05)

    def test_pronic_jumps_follow_mobius(self, jump_reports, tables):
        report = jump_reports[3]
        rows = {row[0]: row for row in report.rows}
        for m in SQUAREFREE_M:
            n = m * (m + 1)
            assert n in report.common
            _, delta_inf, delta_p, mu_m = rows[n]
            assert mu_m == int(tables.mu[m])
            assert np.sign(delta_inf) == mu_m
            assert np.sign(delta_p) == mu_m

    def test_report_shape(self, jump_reports):
        report = jump_reports[3]
        assert isinstance(report, JumpReport)
        assert set(report.common) <= set(report.jumps_inf)
        assert len(report.ratios) == len(report.common)
        assert all(len(row) == len(JumpReport.HEADER) for row in report.rows)

    def test_factor_comes_from_config(self, tables, monkeypatch):
        monkeypatch.setenv("FAREY_JUMP_FACTOR", "1e9")
        report = jump_correlation_report(3, 200, tables)
        assert report.jumps_inf == report.jumps_p == []
        assert math.isnan(report.median_ratio)

    def test_bad_arguments(self, tables):
        with pytest.raises(DomainError):
            jump_correlation_report(4, 100, tables)
        with pytest.raises(DomainError):
            jump_correlation_report(3, 1, tables)
