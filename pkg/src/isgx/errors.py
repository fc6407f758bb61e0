"""Exception hierarchy shared by every module."""


class IsgxError(Exception):
    """Base class for all errors raised by isgx."""


class StructuralError(IsgxError, ValueError):
    """Inputs are malformed: mismatched ground sets, wrong shapes, bad tables."""


class DomainError(IsgxError, ValueError):
    """An algebra element is not supported where it has to be."""

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


class PreconditionError(IsgxError, ValueError):
    """An operation was called on inputs that violate its contract."""


class ResourceError(IsgxError, RuntimeError):
    """A closure computation exceeded its element budget."""


class ScenarioError(IsgxError, ValueError):
    """A scenario file could not be parsed. ``where`` is a JSON path like ``$.action.s``."""

    def __init__(self, message, where="$"):
        super().__init__(f"{where}: {message}")
        self.where = where
