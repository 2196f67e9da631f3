"""Shared exception types."""


class ParameterError(ValueError):
    """A numeric argument is outside its documented domain."""


class LengthMismatchError(ValueError):
    """Bit-vector or matrix dimensions do not line up."""


class ResourceLimitError(RuntimeError):
    """A request would exceed the documented table/enumeration bounds."""


class SamplingFailureError(RuntimeError):
    """Random construction failed after the documented retry budget."""
