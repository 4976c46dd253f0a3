"""Exception hierarchy shared by the analysis modules and the CLI."""


class WorkLoopError(Exception):
    """Base class for every error raised by this package."""


class NumericalFailure(WorkLoopError):
    """A numerical routine could not produce a result."""


class NoSignChange(NumericalFailure, ValueError):
    pass


class MaxIterations(NumericalFailure):
    pass


class AllZeroCoefficients(NumericalFailure, ValueError):
    pass


class DegenerateSignal(WorkLoopError, ValueError):
    pass


class UnsupportedPlant(WorkLoopError, TypeError):
    pass


class OutOfRange(WorkLoopError, ValueError):
    pass


class NotSimpleHarmonic(WorkLoopError, ValueError):
    pass


class NonMonotonicSignal(WorkLoopError, ValueError):
    """The signal has more than two velocity reversals per period."""


class SelfIntersecting(WorkLoopError, ValueError):
    pass


class NotClosed(WorkLoopError, ValueError):
    pass


class NotBivalued(WorkLoopError, ValueError):
    pass


class GridMismatch(WorkLoopError, ValueError):
    pass


class ZeroBetaStar(WorkLoopError, ValueError):
    pass


class NonPositiveStiffness(WorkLoopError, ValueError):
    pass


class OutsideRhoWindow(WorkLoopError, ValueError):
    pass


class NoBand(NumericalFailure):
    pass


class ConfigInvalid(WorkLoopError, ValueError):
    pass
