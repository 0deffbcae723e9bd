"""Exception types shared across the package."""


class GCFibersError(Exception):
    """Base class for all package-specific failures."""


class SpectrumError(GCFibersError):
    """A matrix does not carry the spectrum it is required to have."""


class DomainError(GCFibersError):
    """Input lies outside the mathematical domain of an operation."""


class NumericalError(GCFibersError):
    """A numerical solve produced a result outside its guaranteed bounds."""


class InvalidFaceError(GCFibersError):
    """A subgraph or equality set does not describe a genuine face."""


class SizeGuardError(GCFibersError):
    """Exhaustive enumeration was refused because the diagram is too large."""
