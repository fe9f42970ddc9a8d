"""Exception types raised across the package."""


class LogiconsError(Exception):
    """Base class for all package errors."""


class ShapeError(LogiconsError, ValueError):
    """Operand dimensions do not agree."""


class CapacityError(LogiconsError):
    """An exhaustive enumeration would exceed the supported size."""


class PreconditionError(LogiconsError, ValueError):
    """An operation was called on an argument violating its precondition."""


class NoRootError(LogiconsError):
    """No agent measures the requested input."""


class InfeasibleError(LogiconsError):
    """Synthesis cannot satisfy the redundancy requirement.

    ``agent`` is the 0-based index of the first agent that could not be
    secured.
    """

    def __init__(self, message, agent=None):
        super().__init__(message)
        self.agent = agent


class DecisionSyntaxError(LogiconsError, SyntaxError):
    """Malformed Boolean expression text; ``offset`` is a 0-based byte offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(LogiconsError, NameError):
    """An expression names a variable that does not exist."""

    def __init__(self, name, offset):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset
