"""Exception types shared across the library."""


class ArtComplexityError(Exception):
    """Base class for all library errors."""


class InvalidImageError(ArtComplexityError, ValueError):
    """Raised when an image (or raster argument) violates a precondition."""


class InvalidParameterError(ArtComplexityError, ValueError):
    """Raised when a parameter block violates its invariants."""


class UndefinedMeasureError(ArtComplexityError, ArithmeticError):
    """Raised when a measure has no defined value on this input.

    Callers that aggregate measures treat this as a missing value rather
    than a failure (e.g. skew of a constant image).
    """


class ManifestError(ArtComplexityError, ValueError):
    """Raised for unreadable or invalid corpus manifests."""
