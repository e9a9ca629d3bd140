"""Self-checks: exact local-factor identities and the characterization oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import arith, constants
from .gpr import cross_validate

IDENTITY_H = (1, 3, 5, 15)
H2_BASES = (3, -3, 5, -5, 15, 105, -105)
CHARACTERIZATION_BASES = (2, 3, 5, 6, 12, -2, -5)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def identity_suite(ell_max: int = 10, p_max: int = 10**4, h1_ell_max: int = 50, h2_ell_max: int = 5) -> SuiteResult:
    res = SuiteResult("identities")
    for p in arith.primes_up_to(p_max).tolist()[1:]:
        for ell in range(1, ell_max + 1):
            for h in IDENTITY_H:
                res.checked += 1
                if constants.w_local(p, ell, h) != constants.w_from_f(p, ell, h):
                    res.mismatches.append(("W-F", p, ell, h))
    for ell in range(1, h1_ell_max + 1):
        res.checked += 1
        if constants.h1_const(ell) != constants.w_local(2, ell):
            res.mismatches.append(("H1-W2", ell))
    for a in H2_BASES:
        for ell in range(1, h2_ell_max + 1):
            spec = constants.DensitySpec.from_a(a, ell)
            res.checked += 1
            if constants.h2_const(spec, "enumerate") != constants.h2_const(spec, "per-prime"):
                res.mismatches.append(("H2", a, ell))
    return res


def characterization_suite(bound: int = 10**6, ells=(1, 2, 3), bases=CHARACTERIZATION_BASES, workers: int = 1) -> SuiteResult:
    res = SuiteResult("characterization")
    for a in bases:
        for ell in ells:
            res.checked += 1
            bad = cross_validate(a, bound, ell, workers)
            if bad:
                res.mismatches.append((a, ell, bad[:10]))
    return res
