"""Frontend error types."""

from __future__ import annotations


class SolSyntaxError(Exception):
    """Raised for source that cannot be parsed at all (unbalanced braces,
    malformed declarations). Line/column refer to the offending token."""

    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{message} at line {line}, column {col}")
