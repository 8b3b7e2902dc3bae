"""Exception hierarchy shared by the estimation, bandwidth and simulation code."""


class GammaKernelError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GammaKernelError, ValueError):
    """An argument lies outside the domain of a numeric function."""


class UsageError(GammaKernelError, ValueError):
    """An operation was called with an unusable input (e.g. an empty sample)."""


class IngestionError(UsageError):
    """Raw observations could not be turned into a valid sample."""


class DegenerateSampleError(UsageError):
    """The sample has zero variance, so no reference density can be fitted."""


class DivergedFunctionalError(GammaKernelError, ArithmeticError):
    """A density functional needed for the bandwidth or MISE is infinite."""


class GenerationError(GammaKernelError, RuntimeError):
    """A data generator produced values outside the positive semi-axis."""
