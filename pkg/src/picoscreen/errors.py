"""Exception types shared across modules."""

from __future__ import annotations


class PicoscreenError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(PicoscreenError):
    """Input violates a documented precondition or invariant."""


class CorpusFormatError(PicoscreenError):
    """A corpus file could not be parsed.

    Carries the offending line number (1-based) when one is known.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += str(path)
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
