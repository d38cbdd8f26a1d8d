#!/usr/bin/env python3
"""
Exception hierarchy for the MBS Checker.

Every error derives from the builtin it refines, so callers that only know
about ValueError or LookupError keep working.
"""

from typing import Iterable, Optional


class MbsError(Exception):
    """Base class for all checker errors."""


class DomainError(MbsError, ValueError):
    """An operation was called outside its precondition."""


class UnknownScenarioError(MbsError, LookupError):
    """A scenario id is not part of the model's family."""

    def __init__(self, scenario):
        super().__init__(f"Unknown scenario: {scenario}")
        self.scenario = scenario


class UnsupportedError(MbsError, NotImplementedError):
    """The construct lies outside the fragment the checker decides."""


class GenerationError(MbsError, RuntimeError):
    """A catalog generator could not build an exact surrogate."""


class ModelParseError(MbsError, ValueError):
    """A model document is malformed."""

    def __init__(self, message: str, line: int = 1, column: int = 1, path: str = ""):
        location = f"line {line}, column {column}"
        if path:
            location += f" ({path})"
        super().__init__(f"{message} at {location}")
        self.line = line
        self.column = column
        self.path = path


class CatalogLookupError(MbsError, LookupError):
    """A catalog name is unknown; carries the known alternatives."""

    def __init__(self, name: str, alternatives: Iterable[str], kind: str = "catalog entry"):
        self.alternatives = sorted(alternatives)
        super().__init__(
            f"Unknown {kind} '{name}'. Known: {', '.join(self.alternatives)}"
        )
        self.name = name


def require(condition: bool, message: str, error: Optional[type] = None):
    """Raise DomainError (or the given class) with message unless condition holds."""
    if not condition:
        raise (error or DomainError)(message)
