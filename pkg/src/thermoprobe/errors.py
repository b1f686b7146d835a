"""Exception and warning types shared by all thermoprobe modules."""


class ThermoprobeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ThermoprobeError, ValueError):
    """Input violates a documented precondition."""


class NumericalError(ThermoprobeError, ArithmeticError):
    """A numerical routine failed to reach its tolerance."""


class NotHermitian(ValidationError):
    pass


class SizeOverflow(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class NonPositiveTemperature(ValidationError):
    pass


class NotSymmetricPoint(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class InvalidState(ValidationError):
    pass


class UnknownPreset(ValidationError):
    pass


class DomainEdge(ValidationError):
    pass


class SingularOutcome(ValidationError):
    pass


class IoError(ThermoprobeError, OSError):
    pass


class NoConvergence(NumericalError):
    pass


class DegenerateCouplingsWarning(UserWarning):
    """The analytic eigenbasis is not unique for the given couplings."""


class DegenerateSupportWarning(UserWarning):
    """QFI terms outside the support of the state carried non-negligible weight."""
