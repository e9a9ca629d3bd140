"""Sieving, enumerating and counting l-almost primes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import arith
from .arith import Factorization
from .errors import MemoryBudgetError

DEFAULT_SEGMENT_SIZE = 1 << 22
DEFAULT_MEMORY_BUDGET = 1 << 30
_MIN_SEGMENT = 1 << 12


class Mode(str, enum.Enum):
    EXACT_SQUAREFREE = "exact-squarefree"  # Omega(m) == omega(m) == ell
    AT_MOST = "at-most"  # 1 <= Omega(m) <= ell


@dataclass(frozen=True)
class AlmostPrimeQuery:
    x: int
    ell: int
    mode: Mode = Mode.AT_MOST
    coprime_to: int | None = None

    def __post_init__(self):
        if self.x < 2:
            raise ValueError(f"x must be >= 2, got {self.x}")
        if self.ell < 1:
            raise ValueError(f"ell must be >= 1, got {self.ell}")
        if self.coprime_to == 0:
            raise ValueError("coprime_to must be nonzero")
        object.__setattr__(self, "mode", Mode(self.mode))


def _bytes_per_entry(ell: int) -> int:
    # rem (int64) + two int8 counters + ell int32 factor slots + temporaries
    return 8 + 2 + 4 * ell + 24


def check_memory(x: int, ell: int, segment_size: int, budget: int = DEFAULT_MEMORY_BUDGET) -> None:
    root = math.isqrt(x)
    base = root + 8 * (root // max(1, int(math.log(max(root, 3)))) + 16)
    per = _bytes_per_entry(ell)
    seg = min(segment_size, x)
    need = base + seg * per
    if need <= budget:
        return
    fit = (budget - base) // per
    suggested = 1 << (fit.bit_length() - 1) if fit >= _MIN_SEGMENT else 0
    raise MemoryBudgetError(x, segment_size, need, budget, suggested)


@dataclass
class _Segment:
    lo: int
    values: np.ndarray  # m for the selected entries
    small: np.ndarray  # (k, ell) prime factors <= sqrt(hi), zero padded
    nsmall: np.ndarray
    large: np.ndarray  # remaining prime factor or 1


def _sieve_segment(lo: int, hi: int, query: AlmostPrimeQuery, coprime_primes) -> _Segment:
    """Factor every m in [lo, hi) far enough to decide the query's condition."""
    ell = query.ell
    size = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    big = np.zeros(size, dtype=np.int8)
    distinct = np.zeros(size, dtype=np.int8)
    small = np.zeros((size, ell), dtype=np.int64)
    for p in arith.primes_up_to(math.isqrt(hi - 1)).tolist():
        pk = p
        first = True
        while pk < hi:
            start = (-lo) % pk
            if start >= size:
                break
            idx = np.arange(start, size, pk)
            rem[idx] //= p
            slot = big[idx]
            ok = slot < ell
            small[idx[ok], slot[ok]] = p
            np.minimum(slot + 1, 100, out=slot)
            big[idx] = slot
            if first:
                distinct[idx] += 1
                first = False
            pk *= p
    has_large = rem > 1
    big += has_large
    distinct += has_large
    if query.mode is Mode.AT_MOST:
        mask = big <= ell
    else:
        mask = (big == ell) & (distinct == ell)
    if lo <= 1:
        mask[: 2 - lo] = False
    values = np.arange(lo, hi, dtype=np.int64)
    for r in coprime_primes:
        mask &= values % r != 0
    sel = np.flatnonzero(mask)
    return _Segment(lo, values[sel], small[sel], (big[sel] - has_large[sel]).astype(np.int64), rem[sel])


def _segments(query: AlmostPrimeQuery, lo: int, segment_size: int, memory_budget: int):
    check_memory(query.x, query.ell, segment_size, memory_budget)
    coprime = arith.factorize(abs(query.coprime_to)).primes if query.coprime_to else ()
    start = max(lo, 2)
    while start <= query.x:
        stop = min(start + segment_size, query.x + 1)
        yield _sieve_segment(start, stop, query, coprime)
        start = stop


def enumerate_range(
    query: AlmostPrimeQuery,
    lo: int = 2,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> Iterator[tuple[int, Factorization]]:
    """Qualifying m with lo <= m <= query.x, ascending, with factorizations."""
    for seg in _segments(query, lo, segment_size, memory_budget):
        vals = seg.values.tolist()
        smalls = seg.small.tolist()
        nsmall = seg.nsmall.tolist()
        large = seg.large.tolist()
        for m, row, k, big_p in zip(vals, smalls, nsmall, large):
            primes = row[:k]
            if big_p > 1:
                primes.append(big_p)
            yield m, Factorization.from_primes(primes)


def enumerate_almost_primes(
    query: AlmostPrimeQuery,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> Iterator[tuple[int, Factorization]]:
    """Stream (m, factorization) for every qualifying 2 <= m <= x."""
    return enumerate_range(query, 2, segment_size, memory_budget)


def count_almost_primes(
    query: AlmostPrimeQuery,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> int:
    return sum(len(seg.values) for seg in _segments(query, 2, segment_size, memory_budget))


def landau_main_term(x: float, ell: int) -> float:
    """x (log log x)^(ell-1) / ((ell-1)! log x)."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if not x > math.e:
        raise ValueError(f"landau_main_term needs x > e, got {x}")
    lx = math.log(x)
    return x * math.log(lx) ** (ell - 1) / (math.factorial(ell - 1) * lx)
