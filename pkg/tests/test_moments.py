import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summatoria.errors import DomainError
from summatoria.kernels import FunctionKind, sieve_values
from summatoria.moments import (
    covariance_gap,
    grid_sum_ratio,
    lag_covariance,
    moment_scan,
    pair_product_counts,
    parity_counts,
    prime_adjacent_joint,
    second_moment_decomposition,
    sum_of_squares,
)
from summatoria.series import SummatorySeries, accumulate


@pytest.fixture(scope="module")
def lam_series():
    return accumulate(FunctionKind.LIOUVILLE, 2000, "all")


@pytest.fixture(scope="module")
def mob_series():
    return accumulate(FunctionKind.MOBIUS, 2000, "all")


def constant_one_series(limit):
    ns = np.arange(1, limit + 1, dtype=np.int64)
    return SummatorySeries(FunctionKind.PRIME_INDICATOR, limit, ns, ns.copy())


class TestGridSumRatio:
    def test_liouville_10(self, lam_series):
        assert grid_sum_ratio(lam_series, 10) == 0.0

    def test_mobius_10(self, mob_series):
        assert grid_sum_ratio(mob_series, 10) == 0.01

    def test_constant_series_is_one(self):
        s = constant_one_series(50)
        for n in (1, 7, 50):
            assert grid_sum_ratio(s, n) == 1.0

    def test_rejects_n_zero(self, lam_series):
        with pytest.raises(DomainError):
            grid_sum_ratio(lam_series, 0)


class TestParityCounts:
    def test_liouville_10(self):
        t = sieve_values(FunctionKind.LIOUVILLE, 1, 10)
        pc = parity_counts(t, 10)
        assert (pc.n_plus, pc.n_minus, pc.n_zero) == (5, 5, 0)

    def test_mobius_8(self):
        t = sieve_values(FunctionKind.MOBIUS, 1, 8)
        pc = parity_counts(t, 8)
        assert (pc.n_plus, pc.n_minus, pc.n_zero) == (2, 4, 2)

    def test_liouville_1(self):
        t = sieve_values(FunctionKind.LIOUVILLE, 1, 1)
        pc = parity_counts(t, 1)
        assert (pc.n_plus, pc.n_minus) == (1, 0)

    def test_table_must_cover_prefix(self):
        t = sieve_values(FunctionKind.LIOUVILLE, 2, 10)
        with pytest.raises(DomainError):
            parity_counts(t, 5)
        t2 = sieve_values(FunctionKind.LIOUVILLE, 1, 4)
        with pytest.raises(DomainError):
            parity_counts(t2, 5)


class TestPairProducts:
    def test_balanced_ten(self):
        t = sieve_values(FunctionKind.LIOUVILLE, 1, 10)
        pp = pair_product_counts(parity_counts(t, 10))
        assert pp == (25, 25, 25, 25)
        assert pp.n_pp + pp.n_mm == 10**2 / 2  # same-sign half of the grid

    def test_all_plus(self):
        from summatoria.moments import ParityCounts

        pp = pair_product_counts(ParityCounts(7, 7, 0, 0))
        assert pp == (49, 0, 0, 0)

    def test_mobius_8(self):
        t = sieve_values(FunctionKind.MOBIUS, 1, 8)
        assert pair_product_counts(parity_counts(t, 8)) == (4, 16, 8, 8)

    @given(st.integers(0, 500), st.integers(0, 500), st.integers(0, 500))
    def test_total_is_square_of_nonzero_count(self, plus, minus, zero):
        from summatoria.moments import ParityCounts

        pc = ParityCounts(plus + minus + zero, plus, minus, zero)
        pp = pair_product_counts(pc)
        assert pp.n_pp + pp.n_mm + pp.n_pm + pp.n_mp == (plus + minus) ** 2


class TestCovarianceGap:
    def test_liouville_2(self, lam_series):
        assert covariance_gap(lam_series, 2) == -1.0

    def test_liouville_10_exact_fraction(self, lam_series):
        assert covariance_gap(lam_series, 10) == -1.0 / 9.0

    def test_constant_series_gap_zero(self):
        s = constant_one_series(40)
        for n in (2, 11, 40):
            assert covariance_gap(s, n) == 0.0

    def test_needs_two_terms(self, lam_series):
        with pytest.raises(DomainError):
            covariance_gap(lam_series, 1)

    def test_zero_sum_anchor_is_closed_form(self, lam_series):
        zeros = [n for n in range(2, 2001) if int(lam_series.sums[n - 1]) == 0]
        assert zeros, "Liouville summatory has zeros in range"
        for n in zeros:
            assert covariance_gap(lam_series, n) == -1.0 / (n - 1)

    @given(st.integers(min_value=2, max_value=300))
    @settings(max_examples=25, deadline=None)
    def test_matches_brute_force_pair_mean(self, n):
        values = sieve_values(FunctionKind.MOBIUS, 1, n).values.astype(np.int64)
        s = int(values.sum())
        pair_sum = 0
        for i, j in itertools.product(range(n), repeat=2):
            if i != j:
                pair_sum += int(values[i]) * int(values[j])
        brute = pair_sum / (n * (n - 1)) - (s / n) ** 2
        series = accumulate(FunctionKind.MOBIUS, n, "all")
        assert covariance_gap(series, n) == pytest.approx(brute, rel=1e-12, abs=1e-15)


class TestSumOfSquares:
    def test_liouville_shortcut(self):
        assert sum_of_squares(FunctionKind.LIOUVILLE, 12345) == 12345

    def test_mobius_counts_squarefree(self):
        t = sieve_values(FunctionKind.MOBIUS, 1, 1000)
        assert sum_of_squares(FunctionKind.MOBIUS, 1000, segment_size=130) == int(
            np.count_nonzero(t.values)
        )

    def test_float_kind(self):
        t = sieve_values(FunctionKind.CHEBYSHEV_THETA_TERM, 1, 500)
        want = math.fsum(t.values * t.values)
        assert sum_of_squares(FunctionKind.CHEBYSHEV_THETA_TERM, 500, segment_size=77) == pytest.approx(
            want, rel=1e-14
        )


class TestLagCovariance:
    def test_zero_variance_convention(self):
        # 24..28 are all composite, so the prime indicator is constant there
        t = sieve_values(FunctionKind.PRIME_INDICATOR, 1, 30)
        lc = lag_covariance(t, 1, (24, 28))
        assert lc.cov == 0.0 and lc.corr == 0.0

    def test_matches_numpy_reference(self):
        t = sieve_values(FunctionKind.LIOUVILLE, 1, 5000)
        lc = lag_covariance(t, 3, (10, 4300))
        # pairs (f(k), f(k+3)) for k = 10 .. 4297
        x = t.values[9:4297].astype(float)
        y = t.values[12:4300].astype(float)
        want_cov = float(np.mean(x * y) - x.mean() * y.mean())
        want_corr = want_cov / math.sqrt(
            (np.mean(x * x) - x.mean() ** 2) * (np.mean(y * y) - y.mean() ** 2)
        )
        assert lc.cov == pytest.approx(want_cov, rel=1e-12)
        assert lc.corr == pytest.approx(want_corr, rel=1e-10)
        assert abs(lc.corr) <= 1 + 1e-12

    def test_prime_indicator_negative_adjacent(self):
        t = sieve_values(FunctionKind.PRIME_INDICATOR, 1, 10**5)
        lc = lag_covariance(t, 1, (3, 10**5))
        assert lc.cov < 0

    def test_window_validation(self):
        t = sieve_values(FunctionKind.LIOUVILLE, 1, 100)
        with pytest.raises(DomainError):
            lag_covariance(t, 1, (1, 101))
        with pytest.raises(DomainError):
            lag_covariance(t, 5, (10, 15))
        with pytest.raises(DomainError):
            lag_covariance(t, 0, (1, 100))

    def test_float_kind_path(self):
        t = sieve_values(FunctionKind.CHEBYSHEV_PSI_TERM, 1, 2000)
        lc = lag_covariance(t, 2, (1, 2000))
        assert abs(lc.corr) <= 1 + 1e-12


class TestAdjacentPrimes:
    def test_100_joint_zero_product_positive(self):
        stats = prime_adjacent_joint(100)
        assert stats.joint == 0.0
        assert stats.product > 0.04

    def test_million_dependence(self):
        stats = prime_adjacent_joint(10**6)
        assert stats.joint == 0.0
        assert stats.product > 0.0
        assert stats.joint != stats.product

    @given(st.integers(min_value=5, max_value=3000))
    @settings(max_examples=40, deadline=None)
    def test_joint_always_zero(self, n):
        stats = prime_adjacent_joint(n)
        assert stats.joint == 0.0
        assert 0.0 < stats.product <= 1.0

    def test_small_n_rejected(self):
        with pytest.raises(DomainError):
            prime_adjacent_joint(4)

    def test_table_reuse_must_match(self):
        t = sieve_values(FunctionKind.LIOUVILLE, 1, 100)
        with pytest.raises(DomainError):
            prime_adjacent_joint(100, table=t)


class TestDecomposition:
    def test_liouville_10(self, lam_series):
        assert second_moment_decomposition(lam_series, 10) == (0, 10, -10)

    def test_mobius_8(self, mob_series):
        assert second_moment_decomposition(mob_series, 8) == (4, 6, -2)

    def test_single_term(self, mob_series):
        f2, diag, cross = second_moment_decomposition(mob_series, 1)
        assert (f2, diag, cross) == (1, 1, 0)

    @pytest.mark.parametrize("kind", list(FunctionKind), ids=lambda k: k.label)
    def test_identity_exact_across_kinds(self, kind):
        series = accumulate(kind, 800, "all")
        for n in (1, 2, 17, 256, 800):
            f2, diag, cross = second_moment_decomposition(series, n)
            assert f2 == diag + cross
            if kind.is_integer_valued:
                assert diag <= n  # diagonal bounded by the term count

    def test_brute_force_cross_sum(self):
        n = 60
        values = sieve_values(FunctionKind.LIOUVILLE, 1, n).values.astype(np.int64)
        cross = sum(
            int(values[i]) * int(values[j])
            for i, j in itertools.product(range(n), repeat=2)
            if i != j
        )
        series = accumulate(FunctionKind.LIOUVILLE, n, "all")
        assert second_moment_decomposition(series, n).cross_sum == cross


class TestMomentScan:
    def test_matches_standalone_ops(self, mob_series):
        reports = moment_scan(FunctionKind.MOBIUS, 2000, "geometric", segment_size=333)
        for r in reports:
            assert r.sum_S == int(mob_series.sums[r.n - 1])
            assert r.grid_ratio == grid_sum_ratio(mob_series, r.n)
            assert r.decomposition == second_moment_decomposition(mob_series, r.n)
            if r.n >= 2:
                assert r.covariance_gap == covariance_gap(mob_series, r.n)
            else:
                assert r.covariance_gap is None

    def test_float_kind_scan(self):
        reports = moment_scan(FunctionKind.CHEBYSHEV_PSI_TERM, 3000, segment_size=450)
        values = sieve_values(FunctionKind.CHEBYSHEV_PSI_TERM, 1, 3000).values
        for r in reports[-4:]:
            assert r.sum_S == pytest.approx(math.fsum(values[: r.n]), abs=1e-10)
            assert r.sum_Q == pytest.approx(math.fsum((values * values)[: r.n]), abs=1e-10)
            f2, diag, cross = r.decomposition
            assert f2 == pytest.approx(diag + cross, rel=1e-12)
