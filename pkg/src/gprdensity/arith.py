"""Integer, multiplicative-function and modular-group arithmetic.

Everything here is a pure function of its arguments.  The only shared state
is a read-only smallest-prime-factor table that is built lazily the first
time a small number is factored.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import NotCoprimeError

#: Numbers below this bound are factored by smallest-prime-factor lookup.
SPF_LIMIT = 1 << 21
#: Orders modulo n <= this bound may be found by direct iteration.
NAIVE_ORDER_LIMIT = 64

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
_spf_table: np.ndarray | None = None


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _spf() -> np.ndarray:
    global _spf_table
    if _spf_table is None:
        spf = np.zeros(SPF_LIMIT, dtype=np.int32)
        for p in primes_up_to(math.isqrt(SPF_LIMIT - 1)).tolist():
            block = spf[p * p :: p]
            block[block == 0] = p
        idx = np.flatnonzero(spf == 0)
        spf[idx] = idx
        _spf_table = spf
    return _spf_table


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < SPF_LIMIT and _spf_table is not None:
        return int(_spf_table[n]) == n
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, rng: random.Random) -> int:
    """A nontrivial factor of the odd composite n (Pollard rho, Brent's cycle)."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    """Canonical prime-power decomposition of a positive integer."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"non-canonical factor list {self.factors}")
            prod *= p**e
            last = p
        if prod != self.n:
            raise ValueError(f"factors {self.factors} multiply to {prod}, not {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.factors)

    @property
    def big_omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(e for _, e in self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @classmethod
    def from_primes(cls, primes: Iterable[int]) -> "Factorization":
        counts: dict[int, int] = {}
        n = 1
        for p in primes:
            counts[p] = counts.get(p, 0) + 1
            n *= p
        return cls(n, tuple(sorted(counts.items())))


def _collect(n: int, out: dict[int, int], rng: random.Random) -> None:
    # n > 1 with no prime factor below 48
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _collect(r, out, rng)
        _collect(r, out, rng)
        return
    d = _brent(n, rng)
    _collect(d, out, rng)
    _collect(n // d, out, rng)


def factorize(n: int) -> Factorization:
    """Factor 1 <= n < 2**63 completely; deterministic output."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"expected an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    if n >= 1 << 63:
        raise ValueError(f"factorize supports n < 2**63, got {n}")
    if n < SPF_LIMIT:
        spf = _spf()
        out: list[tuple[int, int]] = []
        m = n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        return Factorization(n, tuple(out))
    counts: dict[int, int] = {}
    m = n
    for p in _SMALL_PRIMES:
        while m % p == 0:
            m //= p
            counts[p] = counts.get(p, 0) + 1
    if m > 1:
        # fixed seed keeps the rho walk, hence run time, reproducible
        _collect(m, counts, random.Random(m))
    return Factorization(n, tuple(sorted(counts.items())))


def _as_factorization(n: int | Factorization) -> Factorization:
    return n if isinstance(n, Factorization) else factorize(n)


def lcm(*values: int) -> int:
    return reduce(lambda x, y: x * y // math.gcd(x, y), values, 1)


def carmichael_lambda(f: int | Factorization) -> int:
    """Exponent of (Z/nZ)^*."""
    f = _as_factorization(f)
    parts = []
    for p, e in f.factors:
        if p == 2:
            parts.append(1 if e == 1 else 2 if e == 2 else 1 << (e - 2))
        else:
            parts.append(p ** (e - 1) * (p - 1))
    return lcm(*parts)


def euler_phi(f: int | Factorization) -> int:
    f = _as_factorization(f)
    out = 1
    for p, e in f.factors:
        out *= p ** (e - 1) * (p - 1)
    return out


def mobius(n: int) -> int:
    """Moebius function evaluated on |n|; mobius(0) is 0."""
    if n == 0:
        return 0
    f = factorize(abs(n))
    if not f.is_squarefree:
        return 0
    return -1 if f.omega % 2 else 1


def valuation(n: int, q: int) -> int:
    """q-adic valuation of the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def integer_root(n: int, k: int) -> int | None:
    """The integer r with r**k == n, or None.  Negative n needs odd k."""
    if n < 0:
        if k % 2 == 0:
            return None
        r = integer_root(-n, k)
        return None if r is None else -r
    if n < 2:
        return n
    est = math.log2(n) / k
    r = round(2**est) if est < 1000 else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # float guess can be off for large n; fall back to bisection
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def is_perfect_square(a: int) -> bool:
    return a >= 0 and math.isqrt(a) ** 2 == a


@dataclass(frozen=True)
class BaseDecomposition:
    """All quantities derived from the base ``a``.

    ``a = a1 * a2**2`` with ``a1`` squarefree and signed, ``atilde`` is the
    odd part of ``a1``, ``h`` the largest exponent with ``a`` a perfect
    ``h``-th power (0 encodes "unbounded" for a = 1 and a = -1), ``s`` the
    2-adic exponent selected by ``a1`` mod 4, and ``b = 2**s * |atilde|``.
    """

    a: int
    a1: int
    a2: int
    atilde: int
    h: int
    s: int
    b: int

    @property
    def is_admissible(self) -> bool:
        """True when a is neither -1 nor a perfect square."""
        return self.a != -1 and not is_perfect_square(self.a)

    @property
    def odd_primes_of_a1(self) -> tuple[int, ...]:
        return factorize(abs(self.atilde)).primes


def decompose_base(a: int) -> BaseDecomposition:
    if a == 0:
        raise ValueError("a must be nonzero")
    sign = -1 if a < 0 else 1
    f = factorize(abs(a))
    a1, a2 = sign, 1
    for p, e in f.factors:
        if e % 2:
            a1 *= p
        a2 *= p ** (e // 2)
    if f.factors:
        h = math.gcd(*(e for _, e in f.factors))
        if sign < 0:
            while h % 2 == 0:
                h //= 2
    else:
        h = 0
    atilde = a1 // 2 if a1 % 2 == 0 else a1
    if a1 % 2 == 0:
        s = 3
    elif a1 % 4 == 1:
        s = 1
    else:
        s = 2
    return BaseDecomposition(a, a1, a2, atilde, h, s, (1 << s) * abs(atilde))


def mult_order(a: int, n: int | Factorization) -> int:
    """Multiplicative order of a modulo n.

    Divides out prime factors of lambda(n) one at a time; only moduli up to
    NAIVE_ORDER_LIMIT are handled by repeated multiplication.
    """
    f = _as_factorization(n)
    n = f.n
    if n < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(a, n) != 1:
        raise NotCoprimeError(a, n)
    if n == 1:
        return 1
    a %= n
    if n <= NAIVE_ORDER_LIMIT:
        t, x = 1, a
        while x != 1:
            x = x * a % n
            t += 1
        return t
    t = carmichael_lambda(f)
    for q, _ in factorize(t).factors:
        while t % q == 0 and pow(a, t // q, n) == 1:
            t //= q
    return t


def is_qth_power_residue(a: int, q: int, p: int) -> bool:
    """Whether a is a q-th power modulo the prime p, for q | p - 1."""
    if (p - 1) % q:
        raise ValueError(f"{q} does not divide {p} - 1")
    if a % p == 0:
        raise NotCoprimeError(a, p)
    return pow(a, (p - 1) // q, p) == 1


def max_valuation_subset(primes: Sequence[int], q: int) -> list[int]:
    """Primes p in the list whose p - 1 has the largest q-adic valuation.

    Empty when q divides no p - 1.
    """
    vals = [valuation(p - 1, q) if p > 1 else 0 for p in primes]
    top = max(vals, default=0)
    if top == 0:
        return []
    return [p for p, v in zip(primes, vals) if v == top]


@lru_cache(maxsize=1 << 16)
def factor_p_minus_1(p: int) -> tuple[tuple[int, int], ...]:
    """Factor list of p - 1, memoized for the hot loops in counting."""
    return factorize(p - 1).factors
