"""Exception hierarchy shared by all modules."""


class HarmkitError(Exception):
    """Base class for every error raised by harmkit."""


class DimensionError(HarmkitError, ValueError):
    """Operands live in spaces of different dimension."""


class AliasError(HarmkitError, ValueError):
    """A frequency is not resolvable on the sampling grid."""


class GridMismatchError(HarmkitError, ValueError):
    pass


class PoleError(HarmkitError, ZeroDivisionError):
    """Evaluation at a singular point of a closed form."""


class SeriesTailError(HarmkitError, ValueError):
    """The declared tail model cannot certify the requested tolerance."""


class EnvelopeError(HarmkitError, ValueError):
    """A function exceeds its declared decay envelope.

    Attributes
    ----------
    witness : float
        A point where the bound fails.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class QuadratureError(HarmkitError, RuntimeError):
    """The quadrature budget cannot meet the requested tolerance."""


class ExponentError(HarmkitError, ValueError):
    pass


class OrthonormalityError(HarmkitError, ValueError):
    """Input vectors are not orthonormal; ``entry`` is the offending Gram index."""

    def __init__(self, message, entry=None, value=None):
        super().__init__(message)
        self.entry = entry
        self.value = value


class DomainError(HarmkitError, ValueError):
    """Measures or functions on incompatible domains were combined."""


class KernelNormalizationError(HarmkitError, ValueError):
    pass
