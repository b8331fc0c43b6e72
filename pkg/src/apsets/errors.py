"""Exception hierarchy shared by all apsets modules."""


class ApsetsError(Exception):
    """Base class for every error raised by this library."""


class ValidationError(ApsetsError):
    """Malformed argument, inconsistent spec, or invalid input document."""


class DimensionMismatchError(ValidationError):
    """Operands live in different ambient dimensions."""


class WindowTooSmallError(ApsetsError):
    """The observation window cannot support the requested computation."""


class GridMismatchError(ValidationError):
    """Two sample grids are not node-for-node comparable."""


class SizeLimitError(ValidationError):
    """Input exceeds a hard size limit (guards factorial enumeration)."""
