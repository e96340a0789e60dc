"""Pointwise arithmetic functions over integer intervals.

Exact sieved kernels for the Mobius function, the Liouville function, the
prime indicator, and the two Chebyshev log-terms (the summands of psi and
theta), plus a trial-division factorization oracle used to cross-validate
the sieves.

All integer-valued kernels are computed with exact integer arithmetic; the
Chebyshev terms are double-precision natural logarithms of exact primes.
A table sieved over [lo, hi] is identical whether the enclosing range was
computed in one segment or many.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import CorruptionError, DomainError, ResourceError

#: Hard cap on the length of a single sieved interval (entries).
DEFAULT_MAX_SEGMENT = 1 << 26


class FunctionKind(Enum):
    """The five supported pointwise arithmetic functions.

    Enum values double as the kind tags of the binary cache format, so the
    numbering is load-bearing and must not change.
    """

    MOBIUS = 0
    LIOUVILLE = 1
    PRIME_INDICATOR = 2
    CHEBYSHEV_PSI_TERM = 3
    CHEBYSHEV_THETA_TERM = 4

    @property
    def is_integer_valued(self) -> bool:
        """True for kinds whose values lie in {-1, 0, +1}."""
        return self in _INTEGER_KINDS

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.int8) if self.is_integer_valued else np.dtype(np.float64)

    @property
    def label(self) -> str:
        """Stable lowercase name used by the CLI and cache filenames."""
        return _KIND_LABELS[self]


_INTEGER_KINDS = frozenset(
    {FunctionKind.MOBIUS, FunctionKind.LIOUVILLE, FunctionKind.PRIME_INDICATOR}
)

_KIND_LABELS = {
    FunctionKind.MOBIUS: "mobius",
    FunctionKind.LIOUVILLE: "liouville",
    FunctionKind.PRIME_INDICATOR: "prime-indicator",
    FunctionKind.CHEBYSHEV_PSI_TERM: "psi",
    FunctionKind.CHEBYSHEV_THETA_TERM: "theta",
}

KIND_BY_LABEL = {label: kind for kind, label in _KIND_LABELS.items()}


@dataclass(frozen=True, eq=False)
class ValueTable:
    """Dense f(k) values over the inclusive interval [lo, hi] for one kind.

    Integer-valued kinds store int8 entries in {-1, 0, +1}; the Chebyshev
    log-terms store float64 entries in [0, log hi]. The backing array is
    marked read-only on construction, so tables are safe to share across
    threads.
    """

    kind: FunctionKind
    lo: int
    hi: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.lo < 1:
            raise DomainError(f"table lower bound must be >= 1, got {self.lo}")
        if self.hi < self.lo:
            raise DomainError(f"table interval is empty: [{self.lo}, {self.hi}]")
        if len(self.values) != self.hi - self.lo + 1:
            raise DomainError(
                f"table length {len(self.values)} does not match [{self.lo}, {self.hi}]"
            )
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def value_at(self, k: int):
        """f(k) as a Python int or float; k must lie inside the table."""
        if not self.lo <= k <= self.hi:
            raise DomainError(f"k={k} outside table range [{self.lo}, {self.hi}]")
        v = self.values[k - self.lo]
        return int(v) if self.kind.is_integer_valued else float(v)

    def validate(self) -> None:
        """Full-scan check of the value-range invariants.

        Raises CorruptionError on the first violated invariant. Used when
        reconstructing tables from untrusted bytes.
        """
        v = self.values
        kind = self.kind
        if kind.is_integer_valued:
            if v.dtype != np.int8:
                raise CorruptionError(f"{kind.label} table has dtype {v.dtype}, expected int8")
            lo_ok = -1 if kind is not FunctionKind.PRIME_INDICATOR else 0
            if v.min(initial=0) < lo_ok or v.max(initial=0) > 1:
                raise CorruptionError(f"{kind.label} table holds values outside its range")
            if kind is FunctionKind.LIOUVILLE and bool((v == 0).any()):
                raise CorruptionError("liouville table holds a zero value")
        else:
            if v.dtype != np.float64:
                raise CorruptionError(f"{kind.label} table has dtype {v.dtype}, expected float64")
            if bool((v < 0).any()) or bool((v > math.log(self.hi) + 1e-12).any()):
                raise CorruptionError(f"{kind.label} table holds values outside [0, log hi]")


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of n as (prime, multiplicity) pairs, ascending.

    n = 1 is represented by the empty tuple.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def big_omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(m for _, m in self.factors)

    @property
    def distinct(self) -> int:
        return len(self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(m == 1 for _, m in self.factors)


class FactorProfile(NamedTuple):
    """Per-k factor statistics for one sieved interval (internal)."""

    omega: np.ndarray       # uint8, prime factors with multiplicity
    distinct: np.ndarray    # uint8, distinct prime factors
    squarefree: np.ndarray  # bool
    spf: np.ndarray         # int64, smallest prime factor (0 at k = 1)


def primes_upto(limit: int) -> np.ndarray:
    """Ascending primes <= limit via a plain Eratosthenes sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def factor_profile(lo: int, hi: int) -> FactorProfile:
    """Sieve factor statistics for every k in [lo, hi].

    Divides out each prime p <= sqrt(hi) power by power across the segment;
    whatever remains above 1 afterwards is a single prime > sqrt(hi). The
    result depends only on (lo, hi), never on any enclosing segmentation.
    """
    n = hi - lo + 1
    omega = np.zeros(n, dtype=np.uint8)
    distinct = np.zeros(n, dtype=np.uint8)
    squarefree = np.ones(n, dtype=bool)
    spf = np.zeros(n, dtype=np.int64)
    remaining = np.arange(lo, hi + 1, dtype=np.int64)

    for p in primes_upto(math.isqrt(hi)):
        p = int(p)
        start = lo + (-lo) % p
        if start > hi:
            continue
        sl = slice(start - lo, n, p)
        remaining[sl] //= p
        omega[sl] += 1
        distinct[sl] += 1
        view = spf[sl]
        view[view == 0] = p
        pk = p * p
        while pk <= hi:
            start = lo + (-lo) % pk
            sl = slice(start - lo, n, pk)
            remaining[sl] //= p
            omega[sl] += 1
            squarefree[sl] = False
            pk *= p

    tail = remaining > 1
    omega[tail] += 1
    distinct[tail] += 1
    np.copyto(spf, remaining, where=tail & (spf == 0))
    return FactorProfile(omega, distinct, squarefree, spf)


def values_from_profile(kind: FunctionKind, lo: int, hi: int, profile: FactorProfile) -> np.ndarray:
    """Materialize one kind's values from sieved factor statistics."""
    omega, distinct, squarefree, spf = profile
    if kind is FunctionKind.MOBIUS:
        signs = (1 - 2 * (distinct.astype(np.int8) & 1)).astype(np.int8)
        return np.where(squarefree, signs, np.int8(0)).astype(np.int8)
    if kind is FunctionKind.LIOUVILLE:
        return (1 - 2 * (omega.astype(np.int8) & 1)).astype(np.int8)
    if kind is FunctionKind.PRIME_INDICATOR:
        return (omega == 1).astype(np.int8)
    if kind is FunctionKind.CHEBYSHEV_PSI_TERM:
        mask = distinct == 1
    elif kind is FunctionKind.CHEBYSHEV_THETA_TERM:
        mask = omega == 1
    else:
        raise DomainError(f"unknown function kind {kind!r}")
    out = np.zeros(hi - lo + 1, dtype=np.float64)
    idx = np.nonzero(mask)[0]
    out[idx] = np.log(spf[idx].astype(np.float64))
    return out


def sieve_values(
    kind: FunctionKind,
    lo: int,
    hi: int,
    *,
    max_segment: int = DEFAULT_MAX_SEGMENT,
) -> ValueTable:
    """Sieve f(k) for every k in the inclusive interval [lo, hi].

    Args:
        kind: which arithmetic function to evaluate.
        lo, hi: interval bounds, 1 <= lo <= hi.
        max_segment: refuse intervals longer than this many entries.

    Raises:
        DomainError: lo < 1 or hi < lo.
        ResourceError: interval longer than max_segment.
    """
    if lo < 1:
        raise DomainError(f"sieve lower bound must be >= 1, got {lo}")
    if hi < lo:
        raise DomainError(f"sieve interval is empty: [{lo}, {hi}]")
    if hi - lo + 1 > max_segment:
        raise ResourceError(
            f"interval [{lo}, {hi}] has {hi - lo + 1} entries, above the cap of {max_segment}"
        )
    profile = factor_profile(lo, hi)
    return ValueTable(kind, lo, hi, values_from_profile(kind, lo, hi, profile))


def factor_oracle(n: int) -> Factorization:
    """Trial-division factorization, the slow reference for every kernel.

    Deterministic and entirely independent of the sieves above; intended
    for n up to about 10**7.
    """
    if n == 0:
        raise DomainError("0 has no prime factorization")
    if n < 0:
        raise DomainError(f"expected a positive integer, got {n}")
    factors: list[tuple[int, int]] = []
    m = n
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            factors.append((p, e))
    d = 5
    while d * d <= m:
        for p in (d, d + 2):
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e:
                factors.append((p, e))
        d += 6
    if m > 1:
        factors.append((m, 1))
    return Factorization(n, tuple(factors))


def pointwise_from_factorization(kind: FunctionKind, fact: Factorization):
    """Evaluate one kind at fact.n straight from the factorization.

    Mobius: 0 unless squarefree, else (-1)**(distinct primes).
    Liouville: (-1)**(prime factors with multiplicity).
    Prime indicator: 1 iff exactly one prime to the first power.
    Chebyshev psi term: log p when n is a power of the single prime p.
    Chebyshev theta term: log n when n is prime.
    """
    if kind is FunctionKind.MOBIUS:
        if not fact.is_squarefree:
            return 0
        return -1 if fact.distinct & 1 else 1
    if kind is FunctionKind.LIOUVILLE:
        return -1 if fact.big_omega & 1 else 1
    if kind is FunctionKind.PRIME_INDICATOR:
        return 1 if fact.big_omega == 1 else 0
    if kind is FunctionKind.CHEBYSHEV_PSI_TERM:
        if fact.distinct == 1:
            return float(np.log(np.float64(fact.factors[0][0])))
        return 0.0
    if kind is FunctionKind.CHEBYSHEV_THETA_TERM:
        if fact.big_omega == 1:
            return float(np.log(np.float64(fact.factors[0][0])))
        return 0.0
    raise DomainError(f"unknown function kind {kind!r}")
