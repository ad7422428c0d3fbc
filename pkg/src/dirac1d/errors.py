"""Exception hierarchy shared by the solvers and the command line."""


class Dirac1DError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(Dirac1DError, ValueError):
    """Argument outside the supported domain of a function."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. gamma at a non-positive integer)."""


class ConvergenceError(Dirac1DError, ArithmeticError):
    """An iterative or series method failed to reach its tolerance."""


class AccuracyLossError(Dirac1DError, ArithmeticError):
    """Cancellation destroyed more digits than the configured budget.

    ``lost_digits`` carries the estimate that triggered the error.
    """

    def __init__(self, message, lost_digits=float("nan")):
        super().__init__(message)
        self.lost_digits = lost_digits


class ScanExhaustedError(Dirac1DError):
    """A root scan hit its window limit before finding enough roots.

    ``found`` holds whatever was located before the limit, so callers can
    still report a partial table.
    """

    def __init__(self, message, found=()):
        super().__init__(message)
        self.found = list(found)


class ContinuityError(Dirac1DError):
    """An assembled wavefunction is discontinuous at the origin."""


class GridError(Dirac1DError):
    """A sampling grid is too coarse or too short for the requested accuracy."""
