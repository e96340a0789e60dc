"""Exact finite-n moment statistics of the arithmetic functions.

Everything here reduces to two prefix aggregates, S(n) = sum of f(k) and
Q(n) = sum of f(k)^2 for k <= n, combined into pair averages over the n x n
index grid. For the ±1/0-valued kinds both aggregates are exact 64-bit
integers, so the algebraic identities (second-moment decomposition, parity
bookkeeping) hold bit-for-bit, not just to rounding.

The pair average over ordered pairs with i != j uses the divisor n(n-1);
pair_product_counts instead counts over the full grid including i = j.
Each docstring says which convention applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .kernels import FunctionKind, ValueTable, sieve_values
from .series import (
    DEFAULT_SEGMENT,
    SummatorySeries,
    _neumaier,
    _segment_bounds,
    resolve_checkpoints,
    value_at,
)


class SecondMomentDecomposition(NamedTuple):
    """S(n)^2 split into its diagonal and off-diagonal parts.

    f_squared = diag_sum + cross_sum holds exactly: the square of the sum
    equals the sum of squares plus the sum over ordered pairs i != j.
    """

    f_squared: float
    diag_sum: float
    cross_sum: float


class PairProducts(NamedTuple):
    """Ordered sign-pair counts over the full n x n grid (i = j included)."""

    n_pp: int
    n_mm: int
    n_pm: int
    n_mp: int


class AdjacentPrimeStats(NamedTuple):
    """Empirical joint vs product frequency for consecutive prime indicators."""

    joint: float
    product: float


@dataclass(frozen=True)
class ParityCounts:
    """How many k <= n have f(k) = +1, -1, 0."""

    n: int
    n_plus: int
    n_minus: int
    n_zero: int

    def __post_init__(self) -> None:
        if self.n_plus + self.n_minus + self.n_zero != self.n:
            raise DomainError("parity counts do not add up to n")


@dataclass(frozen=True)
class LagCovariance:
    """Sample covariance of (f(k), f(k+lag)) over an index window."""

    kind: FunctionKind
    lag: int
    window: tuple[int, int]
    cov: float
    corr: float

    def __post_init__(self) -> None:
        if abs(self.corr) > 1.0 + 1e-9:
            raise DomainError(f"correlation {self.corr} outside [-1, 1]")


@dataclass(frozen=True)
class MomentReport:
    """All per-n moment quantities for one prefix of one kind.

    covariance_gap is None at n = 1, where the pair average over i != j
    is empty. For integer kinds sum_S and sum_Q are exact ints and the
    decomposition identity holds exactly.
    """

    kind: FunctionKind
    n: int
    sum_S: int | float
    sum_Q: int | float
    grid_ratio: float
    covariance_gap: float | None
    decomposition: SecondMomentDecomposition

    def __post_init__(self) -> None:
        f2, diag, cross = self.decomposition
        if self.kind.is_integer_valued and f2 - diag - cross != 0:
            raise DomainError("second-moment decomposition identity violated")


def sum_of_squares(kind: FunctionKind, n: int, *, segment_size: int = DEFAULT_SEGMENT):
    """Q(n) = sum of f(k)^2 for k <= n.

    Liouville needs no scan (f^2 is identically 1). The other kinds stream
    sieve segments; ±1/0 kinds count nonzero entries exactly.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if kind is FunctionKind.LIOUVILLE:
        return n
    if kind.is_integer_valued:
        total = 0
        for lo, hi in _segment_bounds(1, n, segment_size):
            total += int(np.count_nonzero(sieve_values(kind, lo, hi).values))
        return total
    total, comp = 0.0, 0.0
    for lo, hi in _segment_bounds(1, n, segment_size):
        v = sieve_values(kind, lo, hi).values
        total, comp = _neumaier(total, comp, math.fsum(v * v))
    return total + comp


def grid_sum_ratio(series: SummatorySeries, n: int) -> float:
    """S(n)^2 / n^2: the full-grid pair average of f(i)f(j).

    The double sum over all ordered (i, j) with both indices <= n collapses
    to S(n)^2, so the ratio to the n^2 grid size needs only one prefix sum.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    s = value_at(series, n)
    return (s * s) / (n * n)


def parity_counts(table: ValueTable, n: int) -> ParityCounts:
    """Exact counts of +1 / -1 / 0 values among f(1..n) from a dense table."""
    if table.lo != 1 or table.hi < n:
        raise DomainError(f"table [{table.lo}, {table.hi}] does not cover [1, {n}]")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not table.kind.is_integer_valued:
        raise DomainError(f"parity counts need a ±1/0-valued kind, not {table.kind.label}")
    v = table.values[:n]
    plus = int(np.count_nonzero(v == 1))
    minus = int(np.count_nonzero(v == -1))
    return ParityCounts(n, plus, minus, n - plus - minus)


def pair_product_counts(counts: ParityCounts) -> PairProducts:
    """Sign-pair counts over the full grid, i = j included.

    (+,+) pairs number n_plus^2, (-,-) pairs n_minus^2, and each mixed
    orientation n_plus * n_minus. Zero-valued positions contribute nothing.
    """
    return PairProducts(
        counts.n_plus * counts.n_plus,
        counts.n_minus * counts.n_minus,
        counts.n_plus * counts.n_minus,
        counts.n_plus * counts.n_minus,
    )


def covariance_gap(series: SummatorySeries, n: int, *, segment_size: int = DEFAULT_SEGMENT) -> float:
    """Mean of f(i)f(j) over ordered pairs i != j, minus the squared mean.

    Exactly (S^2 - Q) / (n(n-1)) - (S/n)^2. For a ±1-valued sequence with
    S(n) = 0 this is -1/(n-1) on the nose, a useful closed-form anchor.
    """
    if n < 2:
        raise DomainError(f"pair average needs n >= 2, got {n}")
    s = value_at(series, n)
    q = sum_of_squares(series.kind, n, segment_size=segment_size)
    if series.kind is FunctionKind.PRIME_INDICATOR:
        q = s  # f^2 = f for an indicator, no scan needed
    return (s * s - q) / (n * (n - 1)) - (s / n) ** 2


def lag_covariance(table: ValueTable, lag: int, window: tuple[int, int]) -> LagCovariance:
    """Covariance and correlation of pairs (f(k), f(k+lag)) for k in a window.

    Pairs run over k = lo .. hi-lag; normalization divides by the pair
    count. Correlation is defined as 0 when either marginal variance is 0.
    ±1/0 kinds are aggregated in exact integers, so a zero variance is
    detected exactly rather than up to rounding.
    """
    lo, hi = window
    if lag < 1:
        raise DomainError(f"lag must be >= 1, got {lag}")
    if lo < table.lo or hi > table.hi:
        raise DomainError(f"window [{lo}, {hi}] outside table [{table.lo}, {table.hi}]")
    if hi - lo + 1 <= lag + 1:
        raise DomainError(f"window [{lo}, {hi}] too short for lag {lag}")
    x = table.values[lo - table.lo : hi - lag - table.lo + 1]
    y = table.values[lo + lag - table.lo : hi - table.lo + 1]
    m = len(x)
    if table.kind.is_integer_valued:
        xl = x.astype(np.int64)
        yl = y.astype(np.int64)
        sx = int(xl.sum())
        sy = int(yl.sum())
        sxy = int((xl * yl).sum())
        sxx = int((xl * xl).sum())
        syy = int((yl * yl).sum())
        cov_num = m * sxy - sx * sy
        varx_num = m * sxx - sx * sx
        vary_num = m * syy - sy * sy
        cov = cov_num / (m * m)
        if varx_num == 0 or vary_num == 0:
            return LagCovariance(table.kind, lag, (lo, hi), cov, 0.0)
        corr = cov_num / math.sqrt(varx_num) / math.sqrt(vary_num)
        return LagCovariance(table.kind, lag, (lo, hi), cov, corr)
    sx = math.fsum(x)
    sy = math.fsum(y)
    sxy = math.fsum(x * y)
    sxx = math.fsum(x * x)
    syy = math.fsum(y * y)
    cov = sxy / m - (sx / m) * (sy / m)
    varx = sxx / m - (sx / m) ** 2
    vary = syy / m - (sy / m) ** 2
    if varx <= 0.0 or vary <= 0.0:
        return LagCovariance(table.kind, lag, (lo, hi), cov, 0.0)
    corr = cov / math.sqrt(varx * vary)
    return LagCovariance(table.kind, lag, (lo, hi), cov, corr)


def prime_adjacent_joint(N: int, *, table: ValueTable | None = None) -> AdjacentPrimeStats:
    """Joint vs product frequency of consecutive prime indicators.

    Over k = 3 .. N-1: the joint frequency of (k prime and k+1 prime),
    against the product of the two marginal frequencies. One of any two
    consecutive integers above 2 is an even composite, so the joint count
    is identically 0 while the product stays positive; the two disagree,
    which is the dependence being probed.

    A prime-indicator table covering [1, N] may be passed to skip the sieve.
    """
    if N < 5:
        raise DomainError(f"need N >= 5 for the k in [3, N-1] window, got {N}")
    if table is None:
        table = sieve_values(FunctionKind.PRIME_INDICATOR, 1, N)
    elif table.kind is not FunctionKind.PRIME_INDICATOR or table.lo != 1 or table.hi < N:
        raise DomainError("need a prime-indicator table covering [1, N]")
    v = table.values
    x = v[2 : N - 1]  # k = 3 .. N-1
    y = v[3:N]  # k+1 = 4 .. N
    count = N - 3
    joint = int(np.count_nonzero((x == 1) & (y == 1))) / count
    freq_x = int(np.count_nonzero(x == 1)) / count
    freq_y = int(np.count_nonzero(y == 1)) / count
    return AdjacentPrimeStats(joint, freq_x * freq_y)


def second_moment_decomposition(
    series: SummatorySeries, n: int, *, segment_size: int = DEFAULT_SEGMENT
) -> SecondMomentDecomposition:
    """Split S(n)^2 into the diagonal sum Q(n) and the cross term.

    Returns (S^2, Q, S^2 - Q); the first equals the sum of the other two
    exactly, in integer arithmetic for the ±1/0 kinds.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    s = value_at(series, n)
    q = sum_of_squares(series.kind, n, segment_size=segment_size)
    if series.kind is FunctionKind.PRIME_INDICATOR:
        q = s
    return SecondMomentDecomposition(s * s, q, s * s - q)


def moment_scan(
    kind: FunctionKind,
    limit: int,
    checkpoint_plan=None,
    *,
    segment_size: int = DEFAULT_SEGMENT,
) -> list[MomentReport]:
    """MomentReports at every planned checkpoint in one pass over [1, limit].

    Streams sieve segments once, tracking S and Q together, so a full
    ladder of reports costs the same as a single accumulation.
    """
    if limit < 1:
        raise DomainError(f"limit must be >= 1, got {limit}")
    cps = resolve_checkpoints(limit, checkpoint_plan)
    integer = kind.is_integer_valued
    s_at = np.zeros(len(cps), dtype=np.int64 if integer else np.float64)
    q_at = np.zeros(len(cps), dtype=np.int64 if integer else np.float64)

    run_s = 0
    run_q = 0
    fs_total, fs_comp = 0.0, 0.0
    fq_total, fq_comp = 0.0, 0.0
    cp_pos = 0
    for lo, hi in _segment_bounds(1, limit, segment_size):
        values = sieve_values(kind, lo, hi).values
        cp_end = cp_pos + int(np.searchsorted(cps[cp_pos:], hi, side="right"))
        seg_cps = cps[cp_pos:cp_end]
        if integer:
            cum_s = np.cumsum(values, dtype=np.int64)
            cum_q = np.cumsum(values != 0, dtype=np.int64)
            if len(seg_cps):
                s_at[cp_pos:cp_end] = run_s + cum_s[seg_cps - lo]
                q_at[cp_pos:cp_end] = run_q + cum_q[seg_cps - lo]
            run_s += int(cum_s[-1])
            run_q += int(cum_q[-1])
        else:
            sq = values * values
            for i, ncp in enumerate(seg_cps):
                off = int(ncp) - lo + 1
                ts, cs = _neumaier(fs_total, fs_comp, math.fsum(values[:off]))
                tq, cq = _neumaier(fq_total, fq_comp, math.fsum(sq[:off]))
                s_at[cp_pos + i] = ts + cs
                q_at[cp_pos + i] = tq + cq
            fs_total, fs_comp = _neumaier(fs_total, fs_comp, math.fsum(values))
            fq_total, fq_comp = _neumaier(fq_total, fq_comp, math.fsum(sq))
        cp_pos = cp_end

    reports = []
    for i, ncp in enumerate(cps):
        n = int(ncp)
        s = int(s_at[i]) if integer else float(s_at[i])
        q = int(q_at[i]) if integer else float(q_at[i])
        ratio = (s * s) / (n * n)
        gap = None
        if n >= 2:
            gap = (s * s - q) / (n * (n - 1)) - (s / n) ** 2
        decomp = SecondMomentDecomposition(s * s, q, s * s - q)
        reports.append(MomentReport(kind, n, s, q, ratio, gap, decomp))
    return reports
