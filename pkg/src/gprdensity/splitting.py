"""Degree of Q(a^(1/m'), zeta_m) and an empirical check through split primes.

A prime p not dividing a*m splits completely in that field exactly when
p = 1 (mod m) and a is an m'-th power modulo p, so the proportion of such
primes should approach 1 / degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith
from .arith import BaseDecomposition


@dataclass(frozen=True)
class KummerConfig:
    base: BaseDecomposition
    m_prime: int
    m: int

    def __post_init__(self):
        if self.m_prime < 1 or self.m < 1:
            raise ValueError("m' and m must be positive")
        if self.m % self.m_prime:
            raise ValueError(f"m'={self.m_prime} does not divide m={self.m}")
        if not arith.factorize(self.m_prime).is_squarefree:
            raise ValueError(f"m'={self.m_prime} is not squarefree")
        if not self.base.is_admissible:
            raise ValueError(f"a={self.base.a} must be neither -1 nor a perfect square")
        if math.gcd(self.m_prime, self.base.h) != 1:
            raise ValueError(
                f"a={self.base.a} is a q-th power for some prime q | m'={self.m_prime}"
            )

    @classmethod
    def from_a(cls, a: int, m_prime: int, m: int) -> "KummerConfig":
        return cls(arith.decompose_base(a), m_prime, m)


@dataclass(frozen=True)
class SplittingResult:
    hits: int
    trials: int
    expected: Fraction

    @property
    def observed(self) -> float:
        return self.hits / self.trials

    def sigma(self, p: Fraction | float | None = None) -> float:
        """Binomial standard deviation of the observed ratio under density p."""
        p = float(self.expected if p is None else p)
        return math.sqrt(p * (1 - p) / self.trials)


def epsilon_correction(cfg: KummerConfig) -> int:
    """2 when sqrt(a1) already lies in Q(zeta_m), else 1 (via b = 2^s |atilde|)."""
    if cfg.m_prime % 2 == 0 and cfg.m % cfg.base.b == 0:
        return 2
    return 1


def epsilon_by_cases(cfg: KummerConfig, reading: str = "residue") -> int:
    """The same correction written as explicit cases on a1 and the 2-part of m.

    ``reading="valuation"``: 2 || m with a1 = 1 (mod 4), 4 || m with a1 odd,
    or 8 | m.  ``reading="residue"``: 2 | m with a1 = 1 (mod 4), 4 | m with
    a1 = 3 (mod 4), or 8 | m with a1 even.  Both also need |a1| | m.
    """
    a1, m = cfg.base.a1, cfg.m
    if cfg.m_prime % 2 or m % abs(a1):
        return 1
    v = arith.valuation(m, 2)
    if reading == "valuation":
        ok = (v == 1 and a1 % 4 == 1) or (v == 2 and a1 % 2 == 1) or v >= 3
    elif reading == "residue":
        ok = (
            (a1 % 4 == 1 and v >= 1)
            or (a1 % 4 == 3 and v >= 2)
            or (a1 % 2 == 0 and v >= 3)
        )
    else:
        raise ValueError(f"unknown reading {reading!r}")
    return 2 if ok else 1


def extension_degree(cfg: KummerConfig) -> int:
    num = cfg.m_prime * arith.euler_phi(cfg.m)
    eps = epsilon_correction(cfg)
    assert num % eps == 0
    return num // eps


def is_mth_power_residue(a: int, m: int, p: int) -> bool:
    """a is an m-th power mod p, for squarefree m | p - 1, one prime q | m at a time."""
    if (p - 1) % m:
        raise ValueError(f"{m} does not divide {p} - 1")
    return all(arith.is_qth_power_residue(a, q, p) for q in arith.factorize(m).primes)


def empirical_splitting_density(cfg: KummerConfig, x: int) -> SplittingResult:
    if x < 1000:
        raise ValueError("x must be at least 1000")
    a, m, mp = cfg.base.a, cfg.m, cfg.m_prime
    qs = arith.factorize(mp).primes
    hits = trials = 0
    for p in arith.primes_up_to(x).tolist():
        if a % p == 0 or m % p == 0:
            continue
        trials += 1
        if (p - 1) % m == 0 and all(pow(a, (p - 1) // q, p) == 1 for q in qs):
            hits += 1
    return SplittingResult(hits, trials, Fraction(1, extension_degree(cfg)))
