"""Counting almost primes that have ``a`` as a generalized primitive root."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import constants
from .almost_prime import (
    DEFAULT_MEMORY_BUDGET,
    DEFAULT_SEGMENT_SIZE,
    AlmostPrimeQuery,
    Mode,
    enumerate_range,
    landau_main_term,
)
from .errors import HypothesisError
from .gpr import SquarefreeModulus, is_gpr_characterization, is_gpr_direct


@dataclass
class CountReport:
    """Counts for one (a, ell, x, mode).

    ``stratum_count`` covers almost primes coprime to ``a`` only; moduli
    sharing a factor with ``a`` are excluded from both counts.
    """

    a: int
    ell: int
    x: int
    mode: Mode
    gpr_count: int
    stratum_count: int
    landau: float | None = None
    predicted_C: object = None  # mpfr when a prediction was attached
    truncation_prime: int | None = None
    precision_bits: int | None = None

    def __post_init__(self):
        if not 0 <= self.gpr_count <= self.stratum_count:
            raise ValueError("need 0 <= gpr_count <= stratum_count")

    @property
    def ratio_observed(self) -> float:
        return self.gpr_count / self.stratum_count if self.stratum_count else 0.0


def _count_range(a: int, ell: int, mode: Mode, lo: int, hi: int, segment_size: int, memory_budget: int):
    query = AlmostPrimeQuery(hi, ell, mode, coprime_to=a)
    hits = total = 0
    for _, f in enumerate_range(query, lo, segment_size, memory_budget):
        total += 1
        if f.is_squarefree:
            hit = is_gpr_characterization(a, SquarefreeModulus.from_factorization(f))
        else:
            hit = is_gpr_direct(a, f)
        hits += hit
    return hits, total


def _naive_count(a: int, ell: int, x: int, mode: Mode = Mode.AT_MOST):
    """Reference count that applies the order test to every modulus."""
    query = AlmostPrimeQuery(x, ell, mode, coprime_to=a)
    hits = total = 0
    for _, f in enumerate_range(query):
        total += 1
        hits += is_gpr_direct(a, f)
    return hits, total


def count_gpr(
    a: int,
    ell: int,
    x: int,
    mode: Mode | str = Mode.AT_MOST,
    workers: int = 1,
    chunk: int = DEFAULT_SEGMENT_SIZE,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> CountReport:
    if a in (0, -1):
        raise HypothesisError(a, "a must be nonzero and different from -1")
    if x < 2:
        raise ValueError("x must be >= 2")
    mode = Mode(mode)
    ranges = [(lo, min(lo + chunk - 1, x)) for lo in range(2, x + 1, chunk)]
    args = [(a, ell, mode, lo, hi, chunk, memory_budget) for lo, hi in ranges]
    if workers <= 1 or len(ranges) == 1:
        parts = [_count_range(*arg) for arg in args]
    else:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_count_range, *zip(*args)))
    hits = sum(h for h, _ in parts)
    total = sum(t for _, t in parts)
    return CountReport(a, ell, x, mode, hits, total)


def density_report(
    a: int,
    ell: int,
    x: int,
    mode: Mode | str = Mode.AT_MOST,
    P: int = constants.DEFAULT_TRUNCATION,
    precision_bits: int = constants.DEFAULT_PRECISION,
    workers: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> CountReport:
    """A count with the predicted constant and Landau's main term attached.

    Nothing is asserted about convergence; for ell >= 2 the observed ratio
    approaches the constant only at a log log x rate.
    """
    spec = constants.DensitySpec.from_a(a, ell)
    report = count_gpr(a, ell, x, mode, workers, memory_budget=memory_budget)
    breakdown = constants.density_constant(spec, P, precision_bits)
    report.predicted_C = breakdown.C
    report.truncation_prime = P
    report.precision_bits = precision_bits
    report.landau = landau_main_term(x, ell) if x > math.e else None
    return report
