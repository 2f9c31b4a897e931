"""Exception types shared across the package."""


class RingWalkError(Exception):
    pass


class DomainError(RingWalkError, ValueError):
    """A parameter lies outside the domain of the model (k, n, s, b, ...)."""


class InvalidStateError(RingWalkError, ValueError):
    pass


class StateSpaceTooLarge(RingWalkError):
    """Raised before allocating anything whose size exceeds the configured cap."""


class ConvergenceError(RingWalkError, RuntimeError):
    pass
