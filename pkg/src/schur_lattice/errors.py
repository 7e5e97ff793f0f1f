"""Exception types shared across the package."""


class SchurLatticeError(Exception):
    """Base class for all package-specific errors."""


class NegativeValuation(SchurLatticeError):
    """Residue reduction requested for a scalar with valuation < 0."""


class ShapeMismatch(SchurLatticeError):
    """A filling or matrix does not have the expected shape."""


class Singular(SchurLatticeError):
    """A matrix that must be invertible is singular."""


class NonIntegralInput(SchurLatticeError):
    """A generator matrix has an entry with valuation < 0."""


class NotFullRank(SchurLatticeError):
    """An operation requiring a full-rank module received a deficient one."""


class NegativeCycle(SchurLatticeError):
    """An exponent matrix admits a negative cycle and cannot be closed."""


class CapExceeded(SchurLatticeError):
    """A configured enumeration cap would be exceeded."""


class InternalInvariantViolation(SchurLatticeError):
    """Two independent computations of the same quantity disagree.

    This always indicates a bug, never a property of the input; the CLI
    maps it to exit code 4.
    """
