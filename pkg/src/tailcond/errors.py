"""Exception hierarchy shared across the package."""


class TailcondError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(TailcondError, ValueError):
    """A model parameter is outside its admissible range."""


class DomainError(TailcondError, ValueError):
    """A function argument is outside the mathematical domain."""


class RegionError(TailcondError, ValueError):
    """An evaluation point lies outside the model's validity region."""


class DimensionError(TailcondError, ValueError):
    """A vector has the wrong length for the model dimension."""


class DegeneratePointError(TailcondError, ValueError):
    """The conditional distribution is not defined at this point."""


class UnsupportedModelError(TailcondError, ValueError):
    """The requested operation is not available for this model."""


class ShortfallError(TailcondError, RuntimeError):
    """A conditional slice produced fewer observations than requested."""


class EmptySampleError(TailcondError, ValueError):
    """An operation received an empty sample."""


class CriticalValueUnavailableError(TailcondError, LookupError):
    """No built-in critical value exists for the requested (d, alpha)."""
