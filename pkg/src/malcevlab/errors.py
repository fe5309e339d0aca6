"""Exception types shared across the package."""


class MalcevLabError(Exception):
    """Base class for all errors raised by malcevlab."""


class CapExceeded(MalcevLabError):
    """A closure grew past its element cap.

    This is a resource limit, never a mathematical answer.
    """

    def __init__(self, cap: int, what: str = "closure"):
        super().__init__(f"{what} exceeded cap of {cap} elements")
        self.cap = cap
        self.what = what


class VerificationError(MalcevLabError):
    """An internal consistency check failed (e.g. two deciders disagree)."""


class NotCompatible(MalcevLabError):
    """A partition or relation is not compatible with an operation."""

    def __init__(self, op: str, detail: str):
        super().__init__(f"not compatible with {op}: {detail}")
        self.op = op
        self.detail = detail


class ParseError(MalcevLabError):
    """Malformed input file; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
