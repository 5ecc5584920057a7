from __future__ import annotations

from typing import Iterable, Optional, Tuple


def get_message(e: Exception) -> str:
    return e.args[0] if e.args else ""


def set_message(e: Exception, value: str) -> None:
    args = list(e.args)
    if args:
        args[0] = value
    else:
        args.append(value)
    e.args = tuple(args)


class MpsynthError(Exception):
    message = property(get_message, set_message)

    #: process exit code used by the command line
    exit_code = 4


class SpecError(MpsynthError):
    """The input specification or formula is malformed."""

    exit_code = 2


class ParseError(SpecError):
    """Syntax error with a 1-based line and column.

    :param message: description of the problem
    :param line: line of the offending token
    :param column: column of the offending token
    :param error: the grammar library's exception, kept as the cause
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        error: Optional[Exception] = None,
    ):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"syntax error{where}: {message}")
        self.line = line
        self.column = column
        if error is not None:
            self.__cause__ = self.error = error


class UndeclaredAtomError(SpecError):
    def __init__(self, atom: str):
        super().__init__(f"undeclared atom: {atom}")
        self.atom = atom


class PartitionError(SpecError):
    """Atoms declared as both input and output (or declared twice)."""

    def __init__(self, atoms: Iterable[str]):
        self.atoms: Tuple[str, ...] = tuple(atoms)
        super().__init__(f"atoms not partitioned: {', '.join(self.atoms)}")


class DuplicateLabelError(SpecError):
    def __init__(self, label: str):
        super().__init__(f"duplicate goal label: {label}")
        self.label = label


class ResourceError(MpsynthError):
    """A configured ceiling was exceeded.

    :param limit: name of the ceiling
    :param value: the ceiling's value
    """

    exit_code = 3

    def __init__(self, limit: str, value: float, detail: str = ""):
        message = f"{limit} exceeded (limit {value})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.limit = limit
        self.value = value


class DeadlineExceeded(ResourceError):
    def __init__(self, seconds: float, detail: str = ""):
        super().__init__("timeout", seconds, detail)


class UnrealizableError(MpsynthError):
    """The requested goal set has no winning strategy."""

    exit_code = 1

    def __init__(self, labels: Iterable[str]):
        self.labels: Tuple[str, ...] = tuple(labels)
        super().__init__("unrealizable: {" + ",".join(self.labels) + "}")


class InvariantError(MpsynthError):
    """An internal consistency check failed."""


class EngineError(MpsynthError):
    """Misuse of a decision diagram engine."""
