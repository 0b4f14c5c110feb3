"""Exception hierarchy for the whole package.

Everything raised on purpose derives from GroupTheoryError so callers can
catch one base class at the CLI boundary.
"""

from __future__ import annotations


class GroupTheoryError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GroupTheoryError):
    """Malformed presentation text.

    Carries 1-based line and column of the offending token when known.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            loc = f"line {line}" + (f", col {col}" if col is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message)


class DuplicateRelationError(ParseError):
    """The same pow/conj relation appears twice in one file."""


class InvariantError(GroupTheoryError):
    """A presentation fails a structural requirement (consistency, tail shape)."""


class DimensionError(GroupTheoryError):
    """Vector or matrix shapes do not line up."""


class ResourceError(GroupTheoryError):
    """A computation exceeded an explicit size or node budget."""


class NotCentralError(GroupTheoryError):
    """An operation required a central (or elementary central) subgroup."""


class DomainError(GroupTheoryError):
    """Input outside the supported domain (prime too large, rank too high, ...)."""


class ClassError(GroupTheoryError):
    """The group's nilpotence class is outside what the routine supports."""


class ShapeError(GroupTheoryError):
    """A subgroup or subspace argument has the wrong ambient or rank."""


class InternalInconsistencyError(GroupTheoryError):
    """Two independent routes inside the package disagree.  Always a bug."""


class ContradictionError(GroupTheoryError):
    """A computed fact violates a law that holds for every group in the domain.

    Raised instead of returning a verdict, because it means either the input
    is not what it claims to be or the engine is wrong.
    """
