"""Exception types raised across the package."""


class LatticePrimeError(Exception):
    pass


class BoundError(LatticePrimeError, ValueError):
    """A bound lies outside what a table or operation supports."""


class ArgumentError(LatticePrimeError, ValueError):
    pass


class AdmissibilityError(LatticePrimeError, ValueError):
    """An input is not a unit modulo q where a unit is required."""


class PreconditionError(LatticePrimeError, ValueError):
    pass


class HypothesisError(LatticePrimeError, ValueError):
    """A correlation required to be positive vanished."""


class FitError(LatticePrimeError, ValueError):
    pass


class ResourceError(LatticePrimeError, MemoryError):
    pass
