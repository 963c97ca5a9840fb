"""Exception types shared across the package."""


class ParkstatError(Exception):
    pass


class CoinsExhausted(ParkstatError):
    """An unlucky car needed a coin flip but the supplied sequence ran out."""


class SizeLimit(ParkstatError):
    """An exhaustive enumeration would exceed the configured cap."""


class ZeroBaseNegativeExponent(ParkstatError, ZeroDivisionError):
    pass


class SupportMismatch(ParkstatError, ValueError):
    pass


class IdentityFailure(ParkstatError, AssertionError):
    """A closed-form identity did not hold; carries both sides."""

    def __init__(self, message, lhs=None, rhs=None):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs
