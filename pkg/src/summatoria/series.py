"""Checkpointed summatory series S(n) and their deviations.

accumulate() streams sieve segments over [1, limit] in a single monotone
pass, recording S(n) at the requested checkpoints. Integer-valued kinds use
exact int64 accumulators; the Chebyshev kinds carry a Neumaier-compensated
float total across segments so that absolute summation error stays below
1e-6 even at limits around 1e8.

Segments may be sieved by a thread pool, but the reduction is always applied
in segment order, so results are bit-identical for any thread count.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceError
from .kernels import FunctionKind, sieve_values

#: Default sieve segment length for streaming accumulation.
DEFAULT_SEGMENT = 1 << 22
#: Refuse limits above this unless the caller raises the cap explicitly.
DEFAULT_MAX_LIMIT = 10**9
#: Per-segment checkpoint count at or below which float checkpoints are
#: evaluated with exactly rounded partial sums (math.fsum) instead of a
#: running cumulative sum.
_FSUM_CHECKPOINT_CAP = 64


@dataclass(frozen=True, eq=False)
class SummatorySeries:
    """Prefix sums S(n) of one arithmetic function at chosen checkpoints.

    ns holds the checkpoint positions (strictly increasing, ending at
    limit); sums holds S(n) for each, int64 for the ±1/0 kinds and float64
    for the Chebyshev kinds.
    """

    kind: FunctionKind
    limit: int
    ns: np.ndarray
    sums: np.ndarray

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise DomainError(f"series limit must be >= 1, got {self.limit}")
        if len(self.ns) == 0:
            raise DomainError("series needs at least one checkpoint")
        if len(self.ns) != len(self.sums):
            raise DomainError("checkpoint positions and sums differ in length")
        if self.ns[0] < 1 or int(self.ns[-1]) != self.limit:
            raise DomainError("checkpoints must start at n >= 1 and end at limit")
        if len(self.ns) > 1 and not bool((np.diff(self.ns) > 0).all()):
            raise DomainError("checkpoint positions must be strictly increasing")
        if self.kind.is_integer_valued and bool((np.abs(self.sums) > self.ns).any()):
            raise DomainError("|S(n)| <= n violated; accumulator is corrupt")
        self.ns.setflags(write=False)
        self.sums.setflags(write=False)

    def __len__(self) -> int:
        return len(self.ns)

    @property
    def checkpoints(self) -> list[tuple[int, int] | tuple[int, float]]:
        """The (n, S(n)) pairs as Python scalars, ascending in n."""
        cast = int if self.kind.is_integer_valued else float
        return [(int(n), cast(s)) for n, s in zip(self.ns, self.sums)]

    @property
    def final_sum(self):
        """S(limit)."""
        s = self.sums[-1]
        return int(s) if self.kind.is_integer_valued else float(s)


@dataclass(frozen=True)
class MeanModel:
    """Linear density model: the deviation is F(n) = S(n) - m*n.

    All five built-in kinds have vanishing natural density, so m defaults
    to 0 and F coincides with S.
    """

    m: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.m):
            raise DomainError(f"mean model constant must be finite, got {self.m}")


@dataclass(frozen=True, eq=False)
class DeviationSeries:
    """Checkpointed deviations F(n) = S(n) - m*n of a summatory series."""

    base: SummatorySeries
    model: MeanModel
    deviations: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.deviations) != len(self.base.ns):
            raise DomainError("deviation array does not match base checkpoints")
        self.deviations.setflags(write=False)

    @property
    def ns(self) -> np.ndarray:
        return self.base.ns

    @property
    def checkpoints(self) -> list[tuple[int, float]]:
        return [(int(n), float(f)) for n, f in zip(self.base.ns, self.deviations)]


def geometric_ladder(limit: int, ratio: float | None = None) -> np.ndarray:
    """Checkpoint positions ceil(ratio**j) <= limit, deduplicated, plus limit.

    The default ratio sqrt(2) doubles the checkpoint every two steps, which
    spaces samples evenly on a log axis; that default is evaluated in exact
    integer arithmetic as ceil(sqrt(2**j)) so no float drift creeps in.
    """
    if limit < 1:
        raise DomainError(f"ladder limit must be >= 1, got {limit}")
    if ratio is not None and not ratio > 1.0:
        raise DomainError(f"ladder ratio must exceed 1, got {ratio}")
    points = {limit}
    j = 0
    while True:
        if ratio is None:
            root = math.isqrt(1 << j)
            n = root if root * root == 1 << j else root + 1
        else:
            n = math.ceil(ratio**j)
        if n > limit:
            break
        points.add(n)
        j += 1
    return np.array(sorted(points), dtype=np.int64)


def resolve_checkpoints(limit: int, plan=None) -> np.ndarray:
    """Turn a checkpoint plan into an ascending int64 array ending at limit.

    Accepted plans: None or "geometric" (default ladder), "all" (every n),
    a numeric ratio > 1, or an explicit iterable of positions. Explicit
    positions are deduplicated, sorted, and extended with limit if absent.
    """
    if plan is None or (isinstance(plan, str) and plan == "geometric"):
        return geometric_ladder(limit)
    if isinstance(plan, str):
        if plan == "all":
            return np.arange(1, limit + 1, dtype=np.int64)
        raise DomainError(f"unknown checkpoint plan {plan!r}")
    if isinstance(plan, (int, float)) and not isinstance(plan, bool):
        return geometric_ladder(limit, ratio=float(plan))
    points = sorted({int(n) for n in plan} | {limit})
    if not points or points[0] < 1:
        raise DomainError("explicit checkpoints must be positive integers")
    if points[-1] > limit:
        raise DomainError(f"checkpoint {points[-1]} exceeds limit {limit}")
    return np.array(points, dtype=np.int64)


def _neumaier(total: float, comp: float, x: float) -> tuple[float, float]:
    """One compensated-summation step; the running value is total + comp."""
    t = total + x
    if abs(total) >= abs(x):
        comp += (total - t) + x
    else:
        comp += (x - t) + total
    return t, comp


def _segment_bounds(lo: int, hi: int, segment_size: int):
    start = lo
    while start <= hi:
        end = min(start + segment_size - 1, hi)
        yield start, end
        start = end + 1


def _ordered_segments(kind: FunctionKind, bounds, threads: int):
    """Yield (lo, hi, values) in segment order, sieving ahead on threads."""
    if threads <= 1:
        for lo, hi in bounds:
            yield lo, hi, sieve_values(kind, lo, hi).values
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending: deque = deque()
        bounds_iter = iter(bounds)
        for _ in range(threads + 1):
            b = next(bounds_iter, None)
            if b is None:
                break
            pending.append((b, pool.submit(sieve_values, kind, b[0], b[1])))
        while pending:
            (lo, hi), fut = pending.popleft()
            yield lo, hi, fut.result().values
            b = next(bounds_iter, None)
            if b is not None:
                pending.append((b, pool.submit(sieve_values, kind, b[0], b[1])))


def accumulate(
    kind: FunctionKind,
    limit: int,
    checkpoint_plan=None,
    *,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
    max_limit: int = DEFAULT_MAX_LIMIT,
) -> SummatorySeries:
    """Build S(n) = sum of f(k) for k <= n at the planned checkpoints.

    A single monotone pass over [1, limit] in sieve segments. Integer kinds
    accumulate exactly in int64. Chebyshev kinds carry a compensated float
    total between segments; sparse checkpoints (at most _FSUM_CHECKPOINT_CAP
    per segment) are finished with math.fsum partial sums, dense plans with
    a per-segment cumulative sum. Results depend only on (limit,
    checkpoint_plan, segment_size), never on the thread count.

    Raises:
        DomainError: limit < 1 or a malformed plan.
        ResourceError: limit > max_limit.
    """
    if limit < 1:
        raise DomainError(f"limit must be >= 1, got {limit}")
    if limit > max_limit:
        raise ResourceError(f"limit {limit} exceeds the configured maximum {max_limit}")
    if segment_size < 1:
        raise DomainError(f"segment size must be >= 1, got {segment_size}")

    cps = resolve_checkpoints(limit, checkpoint_plan)
    integer = kind.is_integer_valued
    out = np.zeros(len(cps), dtype=np.int64 if integer else np.float64)

    run_int = 0
    run_total, run_comp = 0.0, 0.0
    cp_pos = 0
    bounds = _segment_bounds(1, limit, segment_size)
    for lo, hi, values in _ordered_segments(kind, bounds, threads):
        cp_end = cp_pos + int(np.searchsorted(cps[cp_pos:], hi, side="right"))
        seg_cps = cps[cp_pos:cp_end]
        if integer:
            cum = np.cumsum(values, dtype=np.int64)
            if len(seg_cps):
                out[cp_pos:cp_end] = run_int + cum[seg_cps - lo]
            run_int += int(cum[-1])
        else:
            if len(seg_cps) > _FSUM_CHECKPOINT_CAP:
                cum = np.cumsum(values)
                if len(seg_cps):
                    out[cp_pos:cp_end] = (run_total + run_comp) + cum[seg_cps - lo]
            else:
                for i, n in enumerate(seg_cps):
                    t, c = _neumaier(run_total, run_comp, math.fsum(values[: int(n) - lo + 1]))
                    out[cp_pos + i] = t + c
            run_total, run_comp = _neumaier(run_total, run_comp, math.fsum(values))
        cp_pos = cp_end
    return SummatorySeries(kind, limit, cps, out)


def deviation_series(series: SummatorySeries, model: MeanModel = MeanModel()) -> DeviationSeries:
    """F(n) = S(n) - m*n at every checkpoint of the series."""
    devs = series.sums.astype(np.float64) - model.m * series.ns.astype(np.float64)
    return DeviationSeries(series, model, devs)


def value_at(series: SummatorySeries, n: int, *, segment_size: int = DEFAULT_SEGMENT):
    """S(n) for any n <= limit, re-sieving the gap past the last checkpoint.

    Exact for integer kinds; for Chebyshev kinds the gap is added to the
    nearest stored checkpoint with compensated summation.

    Raises:
        DomainError: n < 1 or n > series.limit.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n > series.limit:
        raise DomainError(f"n={n} exceeds series limit {series.limit}")
    idx = int(np.searchsorted(series.ns, n, side="right")) - 1
    if idx >= 0 and int(series.ns[idx]) == n:
        s = series.sums[idx]
        return int(s) if series.kind.is_integer_valued else float(s)
    start = int(series.ns[idx]) + 1 if idx >= 0 else 1
    if series.kind.is_integer_valued:
        total = int(series.sums[idx]) if idx >= 0 else 0
        for lo, hi in _segment_bounds(start, n, segment_size):
            seg = sieve_values(series.kind, lo, hi).values
            total += int(seg.astype(np.int64).sum())
        return total
    total = float(series.sums[idx]) if idx >= 0 else 0.0
    comp = 0.0
    for lo, hi in _segment_bounds(start, n, segment_size):
        seg = sieve_values(series.kind, lo, hi).values
        total, comp = _neumaier(total, comp, math.fsum(seg))
    return total + comp
