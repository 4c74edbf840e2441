"""Exception hierarchy.

Every error raised for bad physical input derives from :class:`MilburnError`,
which the CLI maps to exit status 2.
"""


class MilburnError(ValueError):
    """Base class for invalid-input and domain failures."""


class ParameterError(MilburnError):
    """A raw physical parameter violates its basic constraints."""


class InstabilityError(MilburnError):
    """The coupling reaches or exceeds the stability bound J < omega1*omega2."""


class DomainError(MilburnError):
    """A quantity is evaluated outside its mathematical domain."""


class NegativeOccupationError(DomainError):
    """A covariance implies a negative mean occupation number."""


class UnknownPresetError(MilburnError):
    """A figure preset name is not recognised."""


class VerificationError(RuntimeError):
    """An oracle cross-check disagreed with the fast kernel."""
