"""Exception types raised across the package."""


class GPRDensityError(Exception):
    """Base class for every error this package raises on purpose."""


class NotCoprimeError(GPRDensityError, ValueError):
    def __init__(self, a, n):
        self.a = a
        self.n = n
        super().__init__(f"{a} is not coprime to {n}")


class HypothesisError(GPRDensityError, ValueError):
    """The base ``a`` violates the density theorem's hypothesis.

    The asymptotic density is only defined for ``a`` different from -1 and
    not a perfect square.
    """

    def __init__(self, a, reason):
        self.a = a
        self.reason = reason
        super().__init__(
            f"a={a} is excluded: {reason} (the density constant requires "
            "a != -1 and a not a perfect square)"
        )


class MemoryBudgetError(GPRDensityError, MemoryError):
    """A sieve request does not fit in the configured memory budget."""

    def __init__(self, x, segment_size, needed_bytes, budget_bytes, suggested_segment_size):
        self.x = x
        self.segment_size = segment_size
        self.needed_bytes = needed_bytes
        self.budget_bytes = budget_bytes
        self.suggested_segment_size = suggested_segment_size
        if suggested_segment_size:
            hint = f"use segment_size <= {suggested_segment_size}"
        else:
            hint = "no segment size fits; lower x or raise the budget"
        super().__init__(
            f"sieving up to x={x} with segment_size={segment_size} needs "
            f"~{needed_bytes} bytes, budget is {budget_bytes} bytes; {hint}"
        )
