"""Exception types shared across the package."""


class ProdelayError(Exception):
    """Base class for every error raised by this package."""


class AlphaMismatch(ProdelayError):
    """Two series (or a series and an operation) live on different t**alpha grids."""


class DomainError(ProdelayError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Gamma evaluated at zero or a negative integer."""


class DimError(ProdelayError):
    """Matrix or vector dimensions do not match."""


class Unconverged(ProdelayError):
    """A truncated series is not converged at the requested evaluation point."""


class FormatError(ProdelayError):
    """A JSON input document is malformed; the message names the offending field."""
