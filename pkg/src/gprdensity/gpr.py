"""Generalized primitive roots: the residue characterization and a direct test.

An integer a is a generalized primitive root modulo n when its order in
(Z/nZ)^* equals lambda(n).  For squarefree n = p_1 ... p_l this is
equivalent to: for every prime q | lambda(n), a fails to be a q-th power
residue modulo at least one p_i whose p_i - 1 carries the maximal power of q.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import arith
from .arith import Factorization, factor_p_minus_1
from .errors import NotCoprimeError


@dataclass(frozen=True)
class SquarefreeModulus:
    primes: tuple[int, ...]
    n: int
    lam: int

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.primes, self.primes[1:])):
            raise ValueError(f"primes must be distinct and ascending: {self.primes}")

    @classmethod
    def from_primes(cls, primes) -> "SquarefreeModulus":
        ps = tuple(sorted(int(p) for p in primes))
        if len(set(ps)) != len(ps):
            raise ValueError(f"repeated prime in {ps}")
        for p in ps:
            if not arith.is_prime(p):
                raise ValueError(f"{p} is not prime")
        n = math.prod(ps)
        return cls(ps, n, arith.lcm(*(p - 1 for p in ps)))

    @classmethod
    def from_factorization(cls, f: Factorization) -> "SquarefreeModulus":
        if not f.is_squarefree:
            raise ValueError(f"{f.n} is not squarefree")
        return cls(f.primes, f.n, arith.lcm(*(p - 1 for p in f.primes)))


def _q_structure(primes):
    """Map each prime q | lambda to (max valuation, primes attaining it)."""
    best: dict[int, tuple[int, list[int]]] = {}
    for p in primes:
        for q, e in factor_p_minus_1(p):
            cur = best.get(q)
            if cur is None or e > cur[0]:
                best[q] = (e, [p])
            elif e == cur[0]:
                cur[1].append(p)
    return best


def satisfies_R(a: int, q: int, m: SquarefreeModulus) -> bool:
    """Property R(q, n): a is a q-th power residue modulo every p in M_q."""
    if math.gcd(a, m.n) != 1 or m.lam % q:
        return False
    return all(
        arith.is_qth_power_residue(a, q, p)
        for p in arith.max_valuation_subset(m.primes, q)
    )


def is_gpr_characterization(a: int, m: SquarefreeModulus) -> bool:
    if math.gcd(a, m.n) != 1:
        raise NotCoprimeError(a, m.n)
    for q, (_, top) in _q_structure(m.primes).items():
        # R(q) holds iff every maximal-valuation prime sees a as a q-th power
        if all(pow(a, (p - 1) // q, p) == 1 for p in top):
            return False
    return True


def is_gpr_direct(a: int, n: int | Factorization) -> bool:
    """Order test: works for any modulus, squarefree or not."""
    f = n if isinstance(n, Factorization) else arith.factorize(n)
    if f.n < 2:
        raise ValueError("modulus must be at least 2")
    if math.gcd(a, f.n) != 1:
        return False
    return arith.mult_order(a, f) == arith.carmichael_lambda(f)


def is_gpr(a: int, n: int | Factorization) -> bool:
    """Counting semantics: characterization for squarefree n, order test otherwise.

    Non-coprime pairs are reported as not a generalized primitive root.
    """
    f = n if isinstance(n, Factorization) else arith.factorize(n)
    if math.gcd(a, f.n) != 1:
        return False
    if f.is_squarefree:
        return is_gpr_characterization(a, SquarefreeModulus.from_factorization(f))
    return is_gpr_direct(a, f)


def _mismatches_in_range(a, lo, hi, ell):
    from .almost_prime import AlmostPrimeQuery, Mode, enumerate_range

    query = AlmostPrimeQuery(hi, ell, Mode.EXACT_SQUAREFREE, coprime_to=a)
    out = []
    for n, f in enumerate_range(query, lo):
        m = SquarefreeModulus.from_factorization(f)
        if is_gpr_characterization(a, m) != is_gpr_direct(a, f):
            out.append(n)
    return out


def cross_validate(a: int, bound: int, ell: int, workers: int = 1, chunk: int = 1 << 18) -> list[int]:
    """Every squarefree n <= bound with ell prime factors, coprime to a,
    where the characterization and the order test disagree."""
    if ell < 1 or bound < 2:
        raise ValueError("need ell >= 1 and bound >= 2")
    ranges = [(lo, min(lo + chunk - 1, bound)) for lo in range(2, bound + 1, chunk)]
    if workers <= 1 or len(ranges) == 1:
        parts = [_mismatches_in_range(a, lo, hi, ell) for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(
                pool.map(_mismatches_in_range, *zip(*[(a, lo, hi, ell) for lo, hi in ranges]))
            )
    return [n for part in parts for n in part]
