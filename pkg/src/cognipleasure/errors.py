"""Exception types shared across the package."""

from __future__ import annotations


class CogniPleasureError(Exception):
    """Base class for every error raised deliberately by this package."""


class ConfigError(CogniPleasureError, ValueError):
    """Invalid configuration document or parameter."""


class DataError(CogniPleasureError, ValueError):
    """Malformed or out-of-range input data.

    ``row`` is the 1-based line number in the source file (header is line 1)
    and ``column`` the offending column name, when known.
    """

    def __init__(self, message: str, *, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class RuleSyntaxError(CogniPleasureError, ValueError):
    """Rule text that the rule grammar does not derive."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        self.detail = message
        super().__init__(f"line {line}, column {column}: {message}")
