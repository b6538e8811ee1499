"""Exception hierarchy for the ccl package."""


class CclError(Exception):
    """Base class for all ccl errors."""


class InvalidArgumentError(CclError, ValueError):
    """Degenerate, non-finite, or otherwise malformed input."""


class SingularMatrixError(CclError):
    """Linear solve requested for a (numerically) singular matrix."""


class UnsupportedGroupError(CclError, ValueError):
    """Group type outside the supported catalog."""


class FeatureDisabledError(CclError):
    """Feature exists but requires an explicit opt-in flag (H4)."""


class NonFiniteSystemError(CclError):
    """Root closure did not terminate; the Gram input is not positive definite."""


class GroupTooLargeError(CclError):
    """Group enumeration exceeded the configured element cap."""


class DegenerateConeError(CclError):
    """Cone construction produced linearly dependent generators."""


class GenericityError(CclError):
    """Generic point sampler exhausted its resample budget."""


class CacheError(CclError):
    """Cache file unreadable or produced by an incompatible schema version."""
