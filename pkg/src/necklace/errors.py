"""Exception hierarchy shared by all modules."""


class NecklaceError(Exception):
    """Base class for every error raised by this package."""


class DomainError(NecklaceError, ValueError):
    """Arguments outside the range where an operation is defined."""


class StepError(NecklaceError, ValueError):
    """Non-positive integration step."""


class ChartError(NecklaceError, ArithmeticError):
    """A trajectory or point left the domain of its affine chart."""


class FrameError(NecklaceError, ValueError):
    """Too few tangent vectors to evaluate a 2-form."""


class DegeneratePencil(NecklaceError):
    """The pencil has an identically vanishing member or discriminant."""


class UnsupportedPencil(NecklaceError):
    """The pencil lies outside the exactly solvable class."""
