"""Exception types shared across the package."""

from __future__ import annotations


class AutotunerError(Exception):
    """Base class for every error raised by this package."""


class ParseError(AutotunerError):
    def __init__(self, message: str, line: int, col: int, path: str = "<source>"):
        super().__init__(f"{path}:{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.path = path


class ProfileError(AutotunerError):
    """Malformed profile file, or profile does not cover the loop tree."""


class ModelError(AutotunerError):
    """Cost model is malformed or misses a loop/variable entry."""


class InvalidGenome(AutotunerError):
    """Genome selects two loops in an ancestor/descendant relation."""


class EmptyGenome(AutotunerError):
    """No offloadable loops: the gene length would be zero."""


class PlanMismatch(AutotunerError):
    """A transfer plan references a loop that is not in the tree."""


class SpawnError(AutotunerError):
    """The evaluator's shell or child process could not be started."""


class ExternalOracleError(AutotunerError):
    """The external parallelizability probe command could not be spawned."""


class DomainError(AutotunerError):
    """Fitness requested for a non-positive measured time."""
