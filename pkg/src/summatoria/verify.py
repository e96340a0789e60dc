"""One-shot verification suite behind the `verify` subcommand.

Ten numbered criteria, each printing PASS / FAIL / SKIP to stderr with its
measured values and elapsed time. The machine-readable report (CSV or JSON)
contains only deterministic fields, never timings, so two runs of
`verify --limit 1e6` emit byte-identical reports regardless of threads.

Criteria whose thresholds were frozen at the default scale (10**6) switch
to SKIP below that scale: the measured values are still reported, but an
empirical constant validated at one scale is not asserted at another.
"""

from __future__ import annotations

import json
import math
import random
import shutil
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cache import load, save
from .errors import IntegrityError, SummatoriaError
from .kernels import (
    FunctionKind,
    factor_oracle,
    pointwise_from_factorization,
    sieve_values,
)
from .moments import lag_covariance, moment_scan, prime_adjacent_joint
from .scaling import SlowGrowthSpec, chebyshev_bound_coverage, normalized_envelope
from .series import MeanModel, accumulate, deviation_series, geometric_ladder

FULL_SCALE = 10**6
ORACLE_SCALE = 10**5
BUDGET_S = 180.0
BUDGET_LARGE_S = 900.0


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    status: str  # PASS | FAIL | SKIP
    measured: str


@dataclass(frozen=True)
class VerifyOutcome:
    limit: int
    criteria: list[CriterionResult]

    @property
    def all_passed(self) -> bool:
        return all(c.status != "FAIL" for c in self.criteria)


def render_csv(outcome: VerifyOutcome) -> str:
    lines = ["criterion,name,status,measured"]
    for c in outcome.criteria:
        measured = c.measured.replace('"', '""')
        lines.append(f'{c.number},{c.name},{c.status},"{measured}"')
    return "\n".join(lines) + "\n"


def render_json(outcome: VerifyOutcome) -> str:
    doc = {
        "limit": outcome.limit,
        "criteria": [
            {"criterion": c.number, "name": c.name, "status": c.status, "measured": c.measured}
            for c in outcome.criteria
        ],
        "all_passed": outcome.all_passed,
    }
    return json.dumps(doc, indent=2) + "\n"


def _fmt(x) -> str:
    v = float(x)
    if v == 0.0:
        v = 0.0
    return format(v, ".12g")


class _Suite:
    """Shared state for one verification run."""

    def __init__(self, limit: int, threads: int, cache_dir, err):
        self.limit = limit
        self.scale = min(limit, FULL_SCALE)
        self.full = limit >= FULL_SCALE
        self.threads = max(1, threads)
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.err = err
        self.results: list[CriterionResult] = []
        self.t0 = time.monotonic()

        n = self.scale
        self.t_mob = sieve_values(FunctionKind.MOBIUS, 1, n)
        self.t_lam = sieve_values(FunctionKind.LIOUVILLE, 1, n)
        self.t_pri = sieve_values(FunctionKind.PRIME_INDICATOR, 1, n)
        self.mob_prefix = self._dense_prefix(FunctionKind.MOBIUS, self.t_mob)
        self.lam_prefix = self._dense_prefix(FunctionKind.LIOUVILLE, self.t_lam)
        self.ladder = geometric_ladder(n)

    def _dense_prefix(self, kind: FunctionKind, table) -> np.ndarray:
        """All-n prefix sums over [1, scale], via the cache when one is set.

        A cache file that fails to load is reported and silently rebuilt;
        a stale or corrupt cache can never fail the run.
        """
        path = None
        if self.cache_dir is not None:
            path = self.cache_dir / f"{kind.label}-series-1-{self.scale}.sumf"
            if path.exists():
                try:
                    cached = load(path)
                    if (
                        cached.kind is kind
                        and cached.limit == self.scale
                        and len(cached.ns) == self.scale
                    ):
                        return cached.sums
                    print(f"warning: cache file {path} does not match, rebuilding", file=self.err)
                except SummatoriaError as exc:
                    print(f"warning: ignoring corrupt cache file {path}: {exc}", file=self.err)
        prefix = np.cumsum(table.values, dtype=np.int64)
        if path is not None:
            from .series import SummatorySeries

            ns = np.arange(1, self.scale + 1, dtype=np.int64)
            save(path, SummatorySeries(kind, self.scale, ns, prefix))
        return prefix

    def record(self, number: int, name: str, status: str, measured: str, t_start: float) -> None:
        elapsed = time.monotonic() - t_start
        self.results.append(CriterionResult(number, name, status, measured))
        print(f"{status:4s} {number:2d} {name}  {measured}  ({elapsed:.2f}s)", file=self.err)

    # -- criteria ---------------------------------------------------------

    def c1_oracle_equivalence(self) -> None:
        t = time.monotonic()
        n_max = min(self.limit, ORACLE_SCALE)
        tables = {
            FunctionKind.MOBIUS: self.t_mob.values,
            FunctionKind.LIOUVILLE: self.t_lam.values,
            FunctionKind.PRIME_INDICATOR: self.t_pri.values,
            FunctionKind.CHEBYSHEV_PSI_TERM: sieve_values(
                FunctionKind.CHEBYSHEV_PSI_TERM, 1, n_max
            ).values,
            FunctionKind.CHEBYSHEV_THETA_TERM: sieve_values(
                FunctionKind.CHEBYSHEV_THETA_TERM, 1, n_max
            ).values,
        }
        mismatches = 0
        for n in range(1, n_max + 1):
            fact = factor_oracle(n)
            for kind, values in tables.items():
                expect = pointwise_from_factorization(kind, fact)
                got = values[n - 1]
                if kind.is_integer_valued:
                    if int(got) != expect:
                        mismatches += 1
                elif float(got) != expect:
                    mismatches += 1
        status = "PASS" if mismatches == 0 else "FAIL"
        self.record(1, "oracle-equivalence", status,
                    f"checked={n_max} kinds=5 mismatches={mismatches}", t)

    def c2_exact_identities(self) -> None:
        t = time.monotonic()
        bad = 0
        points = 0
        for kind, table, prefix in (
            (FunctionKind.MOBIUS, self.t_mob, self.mob_prefix),
            (FunctionKind.LIOUVILLE, self.t_lam, self.lam_prefix),
        ):
            plus = np.cumsum(table.values == 1, dtype=np.int64)
            minus = np.cumsum(table.values == -1, dtype=np.int64)
            reports = moment_scan(kind, self.scale, "geometric")
            for r in reports:
                points += 1
                i = r.n - 1
                n_plus, n_minus = int(plus[i]), int(minus[i])
                s, q = r.sum_S, r.sum_Q
                f2, diag, cross = r.decomposition
                ok = (
                    s == int(prefix[i])
                    and s == n_plus - n_minus
                    and q == n_plus + n_minus
                    and f2 == diag + cross
                    and f2 == s * s
                    and diag == q
                    and (n_plus + n_minus) ** 2
                    == n_plus**2 + n_minus**2 + 2 * n_plus * n_minus
                )
                if not ok:
                    bad += 1
        status = "PASS" if bad == 0 else "FAIL"
        self.record(2, "exact-identities", status,
                    f"ladder_points={points} violations={bad}", t)

    def c3_cross_sum_decay(self) -> None:
        t = time.monotonic()
        n_hi = self.scale
        n_lo = max(2, n_hi // 1000)
        parts = []
        ok = True
        for label, prefix in (("mobius", self.mob_prefix), ("liouville", self.lam_prefix)):
            r_hi = (int(prefix[n_hi - 1]) / n_hi) ** 2
            r_lo = (int(prefix[n_lo - 1]) / n_lo) ** 2
            factor = r_lo / r_hi if r_hi > 0 else math.inf
            parts.append(f"{label}_ratio_lo={_fmt(r_lo)} {label}_ratio_hi={_fmt(r_hi)} "
                         f"{label}_factor={_fmt(factor) if factor != math.inf else 'inf'}")
            if not (r_hi <= 1e-3 and factor >= 10):
                ok = False
        measured = f"n_lo={n_lo} n_hi={n_hi} " + " ".join(parts)
        if not self.full:
            self.record(3, "cross-sum-decay", "SKIP", measured + " note=thresholds-frozen-at-1e6", t)
            return
        self.record(3, "cross-sum-decay", "PASS" if ok else "FAIL", measured, t)

    def c4_pair_average_decay(self) -> None:
        t = time.monotonic()
        points = self.ladder[(self.ladder >= 100)]
        if len(points) == 0:
            self.record(4, "pair-average-decay", "SKIP", "note=no-ladder-points-above-100", t)
            return
        worst = 0.0
        for kind, prefix in ((FunctionKind.MOBIUS, self.mob_prefix),
                             (FunctionKind.LIOUVILLE, self.lam_prefix)):
            if kind is FunctionKind.MOBIUS:
                q_prefix = np.cumsum(self.t_mob.values != 0, dtype=np.int64)
            else:
                q_prefix = None
            for n in points:
                n = int(n)
                s = int(prefix[n - 1])
                q = n if q_prefix is None else int(q_prefix[n - 1])
                gap = (s * s - q) / (n * (n - 1)) - (s / n) ** 2
                worst = max(worst, n * abs(gap))
        zeros = np.nonzero(self.lam_prefix == 0)[0]
        anchor_ok = True
        anchor_n = None
        if len(zeros):
            anchor_n = int(zeros[-1]) + 1
            gap = (0 - anchor_n) / (anchor_n * (anchor_n - 1)) - 0.0
            anchor_ok = gap == -1.0 / (anchor_n - 1)
        ok = worst <= 2.0 and anchor_ok
        measured = (f"max_n_times_gap={_fmt(worst)} anchor_n={anchor_n} "
                    f"anchor_exact={'yes' if anchor_ok else 'no'}")
        self.record(4, "pair-average-decay", "PASS" if ok else "FAIL", measured, t)

    def c5_sqrt_envelope(self) -> None:
        t = time.monotonic()
        roots = np.sqrt(np.arange(1, self.scale + 1, dtype=np.float64))
        parts = []
        ok = True
        for label, prefix in (("mobius", self.mob_prefix), ("liouville", self.lam_prefix)):
            ratios = np.abs(prefix) / roots
            i = int(np.argmax(ratios))
            parts.append(f"{label}_max={_fmt(ratios[i])} {label}_argmax={i + 1}")
            if not ratios[i] <= 1.5:
                ok = False
        self.record(5, "sqrt-envelope", "PASS" if ok else "FAIL", " ".join(parts), t)

    def c6_growth_bound_coverage(self) -> None:
        t = time.monotonic()
        if self.scale < 10:
            self.record(6, "growth-bound-coverage", "SKIP", "note=needs-limit>=10", t)
            return
        ns = np.arange(2, self.scale + 1, dtype=np.float64)
        bound_log = np.sqrt(ns) * np.log(ns)
        bound_small = np.sqrt(ns) * 0.01
        parts = []
        ok = True
        for label, prefix in (("mobius", self.mob_prefix), ("liouville", self.lam_prefix)):
            devs = np.abs(prefix[1:])
            frac_log = np.count_nonzero(devs <= bound_log) / len(ns)
            frac_small = np.count_nonzero(devs <= bound_small) / len(ns)
            parts.append(f"{label}_log={_fmt(frac_log)} {label}_const0.01={_fmt(frac_small)}")
            if frac_log != 1.0 or not frac_small < 1.0:
                ok = False
        self.record(6, "growth-bound-coverage", "PASS" if ok else "FAIL", " ".join(parts), t)

    def c7_adjacent_prime_dependence(self) -> None:
        t = time.monotonic()
        if self.scale < 5:
            self.record(7, "adjacent-prime-dependence", "SKIP", "note=needs-limit>=5", t)
            return
        stats = prime_adjacent_joint(self.scale, table=self.t_pri)
        lc_prime = lag_covariance(self.t_pri, 1, (3, self.scale))
        lc_lam = lag_covariance(self.t_lam, 1, (3, self.scale))
        factor = (abs(lc_prime.corr) / abs(lc_lam.corr)) if lc_lam.corr != 0 else math.inf
        measured = (f"joint={_fmt(stats.joint)} product={_fmt(stats.product)} "
                    f"corr_prime={_fmt(lc_prime.corr)} corr_liouville={_fmt(lc_lam.corr)} "
                    f"factor={_fmt(factor) if factor != math.inf else 'inf'}")
        base_ok = stats.joint == 0.0 and stats.product > 0.0
        if not self.full:
            status = "PASS" if base_ok else "FAIL"
            self.record(7, "adjacent-prime-dependence", status,
                        measured + " note=factor-threshold-frozen-at-1e6", t)
            return
        ok = base_ok and factor >= 5.0
        self.record(7, "adjacent-prime-dependence", "PASS" if ok else "FAIL", measured, t)

    def c8_thread_determinism(self) -> None:
        t = time.monotonic()
        many = max(2, self.threads)
        a = accumulate(FunctionKind.MOBIUS, self.scale, "geometric", threads=1)
        b = accumulate(FunctionKind.MOBIUS, self.scale, "geometric", threads=many)
        ints_equal = np.array_equal(a.ns, b.ns) and np.array_equal(a.sums, b.sums)
        segment = max(1, self.scale // 7)
        c = accumulate(FunctionKind.CHEBYSHEV_PSI_TERM, self.scale, "geometric",
                       threads=1, segment_size=segment)
        d = accumulate(FunctionKind.CHEBYSHEV_PSI_TERM, self.scale, "geometric",
                       threads=many, segment_size=segment)
        floats_equal = np.array_equal(c.sums, d.sums)
        ok = ints_equal and floats_equal
        print(f"info: rebuilt series with 1 and {many} worker threads", file=self.err)
        measured = (f"integer_series_equal={'yes' if ints_equal else 'no'} "
                    f"float_series_bitwise_equal={'yes' if floats_equal else 'no'}")
        self.record(8, "thread-determinism", "PASS" if ok else "FAIL", measured, t)

    def c9_cache_integrity(self) -> None:
        t = time.monotonic()
        rng = random.Random(0x5EED)
        tmp = Path(tempfile.mkdtemp(prefix="summatoria-verify-"))
        kinds = list(FunctionKind)
        try:
            round_trips = 0
            for i in range(100):
                kind = rng.choice(kinds)
                path = tmp / f"artifact-{i}.sumf"
                if rng.random() < 0.5:
                    lo = rng.randrange(1, 5000)
                    hi = lo + rng.randrange(0, 1500)
                    artifact = sieve_values(kind, lo, hi)
                    save(path, artifact)
                    back = load(path)
                    same = (
                        back.kind is artifact.kind
                        and (back.lo, back.hi) == (artifact.lo, artifact.hi)
                        and back.values.tobytes() == artifact.values.tobytes()
                    )
                else:
                    limit = rng.randrange(1, 3000)
                    plan = rng.choice(["geometric", "all", None])
                    artifact = accumulate(kind, limit, plan)
                    save(path, artifact)
                    back = load(path)
                    same = (
                        back.kind is artifact.kind
                        and back.limit == artifact.limit
                        and np.array_equal(back.ns, artifact.ns)
                        and back.sums.tobytes() == artifact.sums.tobytes()
                    )
                round_trips += int(same)

            probe = tmp / "fuzz.sumf"
            base = sieve_values(FunctionKind.MOBIUS, 1, 512)
            save(probe, base)
            raw = probe.read_bytes()
            header_size = len(raw) - 512
            detected = 0
            for _ in range(100):
                buf = bytearray(raw)
                pos = rng.randrange(header_size, len(raw))
                buf[pos] ^= rng.randrange(1, 256)
                probe.write_bytes(bytes(buf))
                try:
                    load(probe)
                except IntegrityError:
                    detected += 1
                except SummatoriaError:
                    pass
            ok = round_trips == 100 and detected == 100
            measured = f"round_trips={round_trips}/100 fuzz_detected={detected}/100"
            self.record(9, "cache-integrity", "PASS" if ok else "FAIL", measured, t)
        finally:
            shutil.rmtree(tmp, ignore_errors=True)

    def c10_runtime_budget(self) -> None:
        t = time.monotonic()
        measured_extra = ""
        budget = BUDGET_S
        if self.limit > FULL_SCALE:
            budget = BUDGET_LARGE_S
            envs = []
            for kind in (FunctionKind.MOBIUS, FunctionKind.LIOUVILLE):
                series = accumulate(kind, self.limit, "geometric", threads=self.threads)
                env = normalized_envelope(deviation_series(series, MeanModel(0.0)))
                envs.append(f"{kind.label}_ladder_max={_fmt(env.max_ratio)} "
                            f"{kind.label}_ladder_argmax={env.argmax_n}")
            measured_extra = " " + " ".join(envs)
        elapsed = time.monotonic() - self.t0
        ok = elapsed <= budget
        measured = f"budget_s={_fmt(budget)}{measured_extra}"
        print(f"info: total elapsed {elapsed:.2f}s against budget {budget:.0f}s", file=self.err)
        self.record(10, "runtime-budget", "PASS" if ok else "FAIL", measured, t)


def run_suite(limit: int = FULL_SCALE, threads: int = 1, cache_dir=None, err=None) -> VerifyOutcome:
    """Run all ten criteria and return the deterministic outcome."""
    err = err if err is not None else sys.stderr
    suite = _Suite(limit, threads, cache_dir, err)
    suite.c1_oracle_equivalence()
    suite.c2_exact_identities()
    suite.c3_cross_sum_decay()
    suite.c4_pair_average_decay()
    suite.c5_sqrt_envelope()
    suite.c6_growth_bound_coverage()
    suite.c7_adjacent_prime_dependence()
    suite.c8_thread_determinism()
    suite.c9_cache_integrity()
    suite.c10_runtime_budget()
    return VerifyOutcome(limit, suite.results)
