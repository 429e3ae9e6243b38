"""Exception and warning types raised across the package."""


class Dirac1DError(Exception):
    """Base class for package errors."""


class DegenerateParametersError(Dirac1DError, ValueError):
    """m = 0 together with V0 = 0 leaves no mass scale."""


class DomainError(Dirac1DError, ValueError):
    pass


class ConvergenceError(Dirac1DError, RuntimeError):
    pass


class InvalidCaseError(Dirac1DError, ValueError):
    """A bound-state operation was asked for an unbound parameter set."""


class InvalidIndexError(Dirac1DError, ValueError):
    """Principal index below the minimum allowed for the spectral case."""


class UnnormalizedStateError(Dirac1DError, RuntimeError):
    pass


class NumericalDegeneracyError(Dirac1DError, RuntimeError):
    pass


class QuadratureError(Dirac1DError, RuntimeError):
    pass


class ResolutionError(Dirac1DError, ValueError):
    """Finite-difference grid too coarse for the targeted state."""


class TruncationWarning(UserWarning):
    """An FD eigenvector carries non-negligible mass near the outer wall."""
