"""Exception hierarchy shared by every module in the package.

Two families matter to callers: :class:`DataError` covers everything wrong
with user-supplied input (bad files, mismatched dimensions, impossible
coalitions), while :class:`CapacityError` signals that an exact computation
was refused because the instance is too large for the enumeration caps.
The command line maps these to distinct exit codes.
"""

from __future__ import annotations


class VotefuseError(Exception):
    """Base class for all errors raised by this package."""


class CapacityError(VotefuseError):
    """An exact computation exceeds its documented size cap.

    Messages always name the cap that was hit and, where one exists, the
    Monte Carlo alternative to reach for instead.
    """


class DataError(VotefuseError):
    """User-supplied data is malformed or inconsistent."""


class InvalidCoalitionError(DataError):
    """A coalition refers to players outside the game."""


class DimensionError(DataError):
    """Two inputs that must agree in size do not."""


class EvidenceError(DataError):
    """An estimate was requested from empty or contradictory evidence."""


class BallotError(DataError):
    """A ranked ballot is not a permutation of the expected labels."""


class ParseError(DataError):
    """A file could not be parsed; carries file, line, and column."""

    def __init__(self, message: str, *, path: str = "", line: int = 0, column: int = 0):
        self.path = path
        self.line = line
        self.column = column
        where = f"{path}:{line}:{column}: " if path else ""
        super().__init__(f"{where}{message}")


class ConfigurationWarning(UserWarning):
    """An option combination is legal but has no effect (e.g. weights with a rule that ignores them)."""
