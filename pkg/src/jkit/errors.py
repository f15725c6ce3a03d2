"""Exception hierarchy shared by the kernel, the DSL and the CLI."""

from __future__ import annotations


class JkitError(Exception):
    """Base class for every error raised by jkit."""


class StructuralError(JkitError):
    """Operands live on different charts, or have incompatible kinds."""


class DegreeError(JkitError):
    """An operation received a tensor of the wrong degree."""


class SingularityError(JkitError):
    """A matrix that must be inverted is singular."""


class UnsupportedInputError(JkitError):
    """The input is valid mathematics but outside what the kernel handles."""


class UsageError(JkitError):
    """A check was called with empty or malformed test data."""


class ResourceError(JkitError):
    """An intermediate expression exceeded the configured term budget."""


class ParseError(JkitError):
    """A DSL source file could not be parsed or evaluated."""

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 expected: tuple[str, ...] = ()) -> None:
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        where = f"{line}:{column}: " if line else ""
        tail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{tail}")
