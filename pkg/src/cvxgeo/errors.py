"""Exception types shared across the package."""


class CvxGeoError(Exception):
    """Base class for every error raised by cvxgeo."""


class GroundSetMismatch(CvxGeoError, ValueError):
    """Two objects that must live over the same ground set do not."""


class CapExceeded(CvxGeoError, ValueError):
    """An enumeration or search was asked to exceed its size cap."""


class PreconditionError(CvxGeoError, ValueError):
    """An operation was called with inputs outside its domain."""


class FormatError(CvxGeoError, ValueError):
    """A text file could not be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
