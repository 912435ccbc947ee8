"""Exception hierarchy shared by every module."""


class TeamLogicError(Exception):
    """Base class for all library errors."""


class ContractError(TeamLogicError, ValueError):
    """A caller violated an operation's precondition."""


class CapacityError(TeamLogicError):
    """An assignment space or brute-force scan exceeds its configured cap."""


class ResourceExceeded(TeamLogicError):
    """The evaluator hit its step limit; the answer is unknown."""


class UnsupportedFragment(TeamLogicError):
    """The formula uses atoms the requested algorithm cannot handle."""


class ParseError(TeamLogicError):
    """Malformed input text. Carries a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"{message} (line {line}, column {column})"
        elif line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
