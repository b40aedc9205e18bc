"""Exception hierarchy shared by all modules."""


class MetablockError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(MetablockError, ValueError):
    """Malformed parameters or elements that do not belong to the group."""


class UnsupportedParametersError(MetablockError, ValueError):
    """Valid parameters outside the regime a closed form is known for."""


class ResourceLimitError(MetablockError, RuntimeError):
    """A brute-force enumeration would exceed the configured size cap."""


class InternalInvariantError(MetablockError, AssertionError):
    """An identity that must hold for valid input did not hold."""
