"""Exception types raised by axisym."""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class EmptyRegionError(ValidationError):
    """No pixel of an image falls below the intensity threshold."""
