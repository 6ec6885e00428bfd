"""Exception hierarchy shared across the package.

InputError covers anything wrong with user-supplied data (CLI exit 3);
CapExceededError covers the explicit desk-scale resource caps (CLI exit 4).
"""


class LojexError(Exception):
    pass


class InputError(LojexError, ValueError):
    pass


class ParseError(InputError):
    """Syntax error in germ text; carries 1-based line/column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CapExceededError(LojexError, ValueError):
    pass
