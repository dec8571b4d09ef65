"""Exception hierarchy shared by every module."""


class TensorWordError(Exception):
    """Base class for all package errors."""


class SizeLimitError(TensorWordError):
    """A Kronecker-sized object would exceed the configured ``max_dim``."""


class CapExceededError(TensorWordError):
    """An enumeration or group order exceeds its cap."""


class DimensionError(TensorWordError, ValueError):
    pass


class NotHermitianError(TensorWordError, ValueError):
    pass


class NotPSDError(TensorWordError, ValueError):
    """Raised when an input expected to be PSD is not; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NumericalFailure(TensorWordError):
    pass


class DegenerateRankError(NumericalFailure):
    """No clear gap in a singular value spectrum."""

    def __init__(self, message, singular_values=()):
        super().__init__(message)
        self.singular_values = list(singular_values)


class SpecError(TensorWordError, ValueError):
    """Malformed group, character or functional spec string."""
