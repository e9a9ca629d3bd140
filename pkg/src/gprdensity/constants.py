"""Local factors, Euler product and correction term of the density constant.

Every per-prime quantity is an exact ``Fraction``.  Floating point (gmpy2
``mpfr``) enters only when the Euler product is accumulated over primes
above ``exact_below``.

The local factor functions take ``(p, ell, h)`` rather than a full
``DensitySpec`` because they depend on ``a`` only through ``gcd(h, p)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import gmpy2
from gmpy2 import mpfr

from . import arith
from .arith import BaseDecomposition
from .errors import HypothesisError

DEFAULT_TRUNCATION = 10**7
DEFAULT_PRECISION = 128
DEFAULT_EXACT_BELOW = 10**4
GUARD_BITS = 32


@dataclass(frozen=True)
class DensitySpec:
    ell: int
    base: BaseDecomposition

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError(f"ell must be >= 1, got {self.ell}")
        if self.base.a == -1:
            raise HypothesisError(-1, "a = -1")
        if arith.is_perfect_square(self.base.a):
            raise HypothesisError(self.base.a, "a is a perfect square")

    @classmethod
    def from_a(cls, a: int, ell: int) -> "DensitySpec":
        if a == 0:
            raise HypothesisError(0, "a = 0")
        return cls(ell, arith.decompose_base(a))

    @property
    def h(self) -> int:
        return self.base.h

    @property
    def a1(self) -> int:
        return self.base.a1


@dataclass(frozen=True)
class LocalIndex:
    """A pair (i, j) in [0, k] x [0, ell - k] other than (0, 0)."""

    k: int
    i: int
    j: int
    ell: int

    def __post_init__(self):
        if not 1 <= self.k <= self.ell:
            raise ValueError(f"k={self.k} outside [1, {self.ell}]")
        if not (0 <= self.i <= self.k and 0 <= self.j <= self.ell - self.k):
            raise ValueError(f"(i, j)=({self.i}, {self.j}) outside the index box")
        if self.i == 0 and self.j == 0:
            raise ValueError("(0, 0) is excluded from the index set")


def index_set(k: int, ell: int) -> list[LocalIndex]:
    return [
        LocalIndex(k, i, j, ell)
        for i in range(k + 1)
        for j in range(ell - k + 1)
        if i or j
    ]


@dataclass
class ConstantBreakdown:
    ell: int
    a: int
    h: int
    euler_product: mpfr
    tail_bound: mpfr
    H2: Fraction
    V: Fraction
    C: mpfr
    truncation_prime: int
    precision_bits: int


def r_local(p: int, m: int, ell: int) -> Fraction:
    """R_p(m) for odd p; the dyadic R_2(m) for p = 2."""
    if m > ell:
        raise ValueError(f"m={m} exceeds ell={ell}")
    if m < 1:
        raise ValueError("m must be >= 1")
    top = ell - m
    if p == 2:
        return sum(
            (Fraction((-1) ** j * comb(top, j), (1 << j) * ((1 << (m + j)) - 1)) for j in range(top + 1)),
            Fraction(0),
        )
    total = Fraction(0)
    for r in range(top + 1):
        total += Fraction(
            (-1) ** r * comb(top, r) * (p - 1) ** (top - r),
            (p ** (m + r) - 1) * (p - 2) ** top,
        )
    return total


@lru_cache(maxsize=1 << 15)
def _w_theorem(p: int, ell: int, g: int) -> Fraction:
    total = Fraction(0)
    for i in range(1, ell + 1):
        for j in range(ell - i + 1):
            total += Fraction(
                comb(ell, i) * comb(ell - i, j) * (-1) ** j * p ** (i + j) * g**i,
                p ** (2 * i) * (p - 1) ** j * (p ** (i + j) - 1),
            )
    return total


def w_local(p: int, ell: int, h: int = 1) -> Fraction:
    """W(p) as the double binomial sum over (i, j)."""
    return _w_theorem(p, ell, math.gcd(h, p))


@lru_cache(maxsize=1 << 15)
def _w_collapsed(p: int, ell: int, g: int) -> Fraction:
    x = Fraction(g, p * p) - Fraction(1, p - 1)
    y = Fraction(-1, p - 1)
    total = Fraction(0)
    xn, yn = Fraction(1), Fraction(1)
    for n in range(1, ell + 1):
        xn *= x
        yn *= y
        total += comb(ell, n) * Fraction(p**n, p**n - 1) * (xn - yn)
    return total


def w_local_collapsed(p: int, ell: int, h: int = 1) -> Fraction:
    """W(p) regrouped by n = i + j: a single sum of ell terms.

    sum_n C(ell, n) p^n / (p^n - 1) * ((g/p^2 - 1/(p-1))^n - (-1/(p-1))^n)
    with g = gcd(h, p).  Equal to ``w_local`` as a rational.
    """
    return _w_collapsed(p, ell, math.gcd(h, p))


def w_upper_bound(p: int, ell: int, h: int = 1) -> Fraction:
    """ell * gcd(h, p) / (p (p - 1)), an upper bound for W(p) at every prime."""
    return Fraction(ell * math.gcd(h, p), p * (p - 1))


def w_heuristic_series(q: int, ell: int, h: int, depth: int) -> Fraction:
    """Partial sum over valuations m <= depth of the probabilistic series.

    Term m is sum_i C(ell, i) P(v < m)^(ell-i) P(v = m, residue)^i, which
    telescopes to (A + B)^ell - A^ell.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    g = math.gcd(h, q)
    total = Fraction(0)
    for m in range(1, depth + 1):
        phi = (q - 1) * q ** (m - 1)
        below = 1 - Fraction(1, phi)
        hit = Fraction(g * (q - 1), q * q * phi)
        total += sum(comb(ell, i) * below ** (ell - i) * hit**i for i in range(1, ell + 1))
    return total


def f_local(p: int, i: int, ell: int, h: int = 1) -> Fraction:
    if p == 2:
        raise ValueError("F_i is defined for odd primes only")
    if not 1 <= i <= ell:
        raise ValueError(f"i={i} outside [1, {ell}]")
    g = math.gcd(h, p)
    return Fraction(g * (p - 1), p * p * (p - 2)) ** i * (1 + r_local(p, i, ell))


def w_from_f(p: int, ell: int, h: int = 1) -> Fraction:
    """((p-2)/(p-1))^ell * sum_i C(ell, i) F_i(p)."""
    return Fraction(p - 2, p - 1) ** ell * sum(
        comb(ell, i) * f_local(p, i, ell, h) for i in range(1, ell + 1)
    )


@lru_cache(maxsize=256)
def h1_const(ell: int) -> Fraction:
    """Contribution of the prime 2 to the main product."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    inner = sum(
        comb(ell, i) * Fraction(1, 4**i) * (1 + Fraction(2 ** (ell - i)) * r_local(2, i, ell))
        for i in range(1, ell + 1)
    )
    return Fraction(1, 2**ell) * (inner + Fraction(1, 2**ell))


def sigma_const(k: int, ell: int, a1: int) -> Fraction:
    tail = Fraction(5 ** (ell - k) * 2**k, 4**ell)
    if a1 % 2 == 0:
        return (-1) ** k * tail
    head = Fraction(2**k, 2**ell)
    if a1 % 4 == 1:
        return head + tail
    return (-1) ** k * head + tail


def delta_const(k: int, ell: int, a1: int) -> Fraction:
    if not 1 <= k <= ell:
        raise ValueError(f"k={k} outside [1, {ell}]")
    series = Fraction(0)
    for m in range(ell - k + 1):
        inner = sum(
            (
                Fraction((-1) ** r * comb(ell - k - m, r), (1 << r) * ((1 << (k + m + r)) - 1))
                for r in range(ell - k - m + 1)
            ),
            Fraction(0),
        )
        series += comb(ell - k, m) * Fraction(1, 8**m) * inner
    return sigma_const(k, ell, a1) + Fraction(2) ** (ell - 2 * k) * series


def g_local(p: int, idx: LocalIndex, h: int = 1) -> Fraction:
    if p == 2:
        raise ValueError("G is evaluated at odd primes only")
    i, j, k, ell = idx.i, idx.j, idx.k, idx.ell
    g = math.gcd(h, p)
    return (
        comb(k, i)
        * comb(ell - k, j)
        * Fraction((p - 1) * g, p * p * (p - 2)) ** (i + j)
        * (2 - p) ** i
        * (1 + r_local(p, k + j, ell))
    )


def _convolution_enumerate(primes, k, ell, h) -> Fraction:
    """Sum over ordered factorizations of prod(primes) into |D| slots."""
    slots = index_set(k, ell)
    total = Fraction(0)
    for choice in itertools.product(range(len(slots)), repeat=len(primes)):
        parts: dict[int, list[int]] = {}
        for p, s in zip(primes, choice):
            parts.setdefault(s, []).append(p)
        term = Fraction(1)
        for s, ps in parts.items():
            # G is multiplicative, so G(a_ij) is the product over its primes
            for p in ps:
                term *= g_local(p, slots[s], h)
        total += term
    return total


def _convolution_per_prime(primes, k, ell, h) -> Fraction:
    out = Fraction(1)
    for p in primes:
        out *= sum(g_local(p, idx, h) for idx in index_set(k, ell))
    return out


def h2_const(spec: DensitySpec, strategy: str = "per-prime") -> Fraction:
    if strategy == "enumerate":
        conv = _convolution_enumerate
    elif strategy == "per-prime":
        conv = _convolution_per_prime
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    ell, h, a1 = spec.ell, spec.h, spec.a1
    primes = spec.base.odd_primes_of_a1
    mu = (-1) ** len(primes)
    total = Fraction(0)
    for k in range(1, ell + 1):
        weight = Fraction(1)
        for p in primes:
            weight *= Fraction((p - 2) ** (ell - k), (p - 1) ** ell)
        total += (
            comb(ell, k)
            * Fraction(1, 2 ** (ell + k))
            * delta_const(k, ell, a1)
            * mu**k
            * weight
            * conv(primes, k, ell, h)
        )
    return total


def v_const(spec: DensitySpec) -> Fraction:
    """The a-specific correction V, exact."""
    primes = spec.base.odd_primes_of_a1
    mu_2a = (-1) ** (len(primes) + 1)
    v = mu_2a * h2_const(spec) / (1 - w_local_collapsed(2, spec.ell, spec.h))
    for p in primes:
        v /= 1 - w_local_collapsed(p, spec.ell, spec.h)
    return v


def v_ell1_closed_form(spec: DensitySpec) -> Fraction:
    """V at ell = 1, hand-reduced: -prod(-g/(p^2 - p - g)) if a1 = 1 mod 4, else 0."""
    if spec.ell != 1:
        raise ValueError("closed form only holds for ell = 1")
    if spec.a1 % 4 != 1:
        return Fraction(0)
    out = Fraction(-1)
    for p in spec.base.odd_primes_of_a1:
        g = math.gcd(spec.h, p)
        out *= Fraction(-g, p * p - p - g)
    return out


def _log2_term_bounds(ell: int) -> list[float]:
    """log2 of 2 n C(ell, n), used to drop negligible high-n terms of W(p)."""
    return [math.log2(2 * n * comb(ell, n)) for n in range(1, ell + 1)]


@lru_cache(maxsize=64)
def _euler_product(ell: int, h: int, P: int, precision_bits: int, exact_below: int):
    work = precision_bits + GUARD_BITS
    ctx = gmpy2.context(precision=work)
    with ctx:
        one = mpfr(1)
        acc = mpfr(1)
        logs = _log2_term_bounds(ell)
        nmax = ell
        for p in arith.primes_up_to(P).tolist():
            if p <= exact_below or h % p == 0:
                w = w_local_collapsed(p, ell, h)
                factor = one - mpfr(gmpy2.mpq(w.numerator, w.denominator))
            else:
                # drop terms n whose bound 2 n C(ell,n) / (p^2 (p-1)^(n-1))
                # sits below 2^-work relative to W(p) ~ 1/p^2
                lp = math.log2(p - 1)
                while nmax > 1 and logs[nmax - 1] - (nmax - 1) * lp < -work - 8:
                    nmax -= 1
                pm = mpfr(p)
                y = -one / (pm - 1)
                x = one / (pm * pm) + y
                xn, yn = one, one
                w = mpfr(0)
                pn = one
                for n in range(1, nmax + 1):
                    xn *= x
                    yn *= y
                    pn *= pm
                    w += comb(ell, n) * pn / (pn - 1) * (xn - yn)
                factor = one - w
            if factor <= 0:
                raise ArithmeticError(f"local factor 1 - W({p}) = {factor} is not positive")
            acc *= factor
    with gmpy2.context(precision=precision_bits):
        value = +acc
        tail = mpfr(ell) / P
    return value, tail


def euler_product(
    spec: DensitySpec | tuple[int, int],
    P: int = DEFAULT_TRUNCATION,
    precision_bits: int = DEFAULT_PRECISION,
    exact_below: int = DEFAULT_EXACT_BELOW,
):
    """prod_{p <= P} (1 - W(p)) and a bound on its relative truncation error.

    ``spec`` may be a DensitySpec or an ``(ell, h)`` pair.  Every factor lies
    in (0, 1] and W(p) <= ell/(p(p-1)) once p > h, so the omitted tail
    satisfies 1 >= prod_{p > P} (1 - W(p)) >= 1 - ell * sum_{n > P} 1/(n(n-1))
    = 1 - ell/P: the true product lies in [value (1 - tail), value].
    """
    ell, h = (spec.ell, spec.h) if isinstance(spec, DensitySpec) else spec
    if P < 100:
        raise ValueError("truncation prime must be >= 100")
    if precision_bits < 96:
        raise ValueError("precision_bits must be >= 96")
    if h >= P:
        raise ValueError("truncation must exceed h for the tail bound to hold")
    return _euler_product(ell, h, P, precision_bits, exact_below)


def density_constant(
    spec: DensitySpec,
    P: int = DEFAULT_TRUNCATION,
    precision_bits: int = DEFAULT_PRECISION,
    exact_below: int = DEFAULT_EXACT_BELOW,
) -> ConstantBreakdown:
    value, tail = euler_product(spec, P, precision_bits, exact_below)
    v = v_const(spec)
    with gmpy2.context(precision=precision_bits):
        c = value * (1 + mpfr(gmpy2.mpq(v.numerator, v.denominator)))
    return ConstantBreakdown(
        ell=spec.ell,
        a=spec.base.a,
        h=spec.h,
        euler_product=value,
        tail_bound=tail,
        H2=h2_const(spec),
        V=v,
        C=c,
        truncation_prime=P,
        precision_bits=precision_bits,
    )
