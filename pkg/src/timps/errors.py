"""Exception types shared across the package."""


class TimpsError(Exception):
    """Base class for all package errors."""


class InvalidInput(TimpsError):
    """Malformed or inconsistent input (bad dimensions, singular matrix, ...)."""


class NotInjective(TimpsError):
    """Operation requires an injective tensor (full column rank of the tensor map)."""


class NotNormal(TimpsError):
    """Operation requires a normal tensor (injective after blocking)."""


class TheoremsInapplicable(TimpsError):
    """Chain too short: the cycle correspondence needs N >= 2L + 1 sites."""


class Unsupported(TimpsError):
    """Request outside the catalogued families / solvable cases."""


class ResourceLimit(TimpsError):
    """Dense representation would exceed the configured amplitude cap."""


class Indeterminate(TimpsError):
    """Quantity is numerically undefined (0/0-type degeneracy)."""


class ReducibleTensor(InvalidInput):
    """Tensor has deficient local rank; reduce dimensions before classifying."""
