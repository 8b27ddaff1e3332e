"""Exception types raised across the package."""


class NCPhaseError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(NCPhaseError, ValueError):
    pass


class NumericalDegeneracyError(NCPhaseError, ArithmeticError):
    pass


class NoRealGaugeError(NCPhaseError, ValueError):
    """The gauge constraint has no real solution for the given (theta, zeta)."""


class DegenerateCoefficientsError(NCPhaseError, ArithmeticError):
    pass


class InvalidStateError(NCPhaseError, ValueError):
    """A state that should be physical failed a physicality check."""


class GridResolutionError(NCPhaseError, RuntimeError):
    pass


class UnsupportedStateError(NCPhaseError, ValueError):
    pass


class TruncationError(NCPhaseError, RuntimeError):
    pass
