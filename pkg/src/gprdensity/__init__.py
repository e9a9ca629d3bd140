"""Densities of almost primes that admit a fixed generalized primitive root."""

from .arith import BaseDecomposition, Factorization, decompose_base, factorize
from .constants import DensitySpec, density_constant, euler_product
from .empirics import count_gpr, density_report
from .errors import GPRDensityError, HypothesisError, MemoryBudgetError, NotCoprimeError
from .gpr import is_gpr, is_gpr_characterization, is_gpr_direct

__all__ = [
    "BaseDecomposition",
    "DensitySpec",
    "Factorization",
    "GPRDensityError",
    "HypothesisError",
    "MemoryBudgetError",
    "NotCoprimeError",
    "count_gpr",
    "decompose_base",
    "density_constant",
    "density_report",
    "euler_product",
    "factorize",
    "is_gpr",
    "is_gpr_characterization",
    "is_gpr_direct",
]
