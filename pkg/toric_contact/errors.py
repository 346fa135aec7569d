from typing import Optional


class ToricError(ValueError):
    """Base class for failures caused by the input fan or its arguments."""


class ZeroVectorError(ToricError):
    pass


class DimensionMismatchError(ToricError):
    pass


class FanSyntaxError(ToricError):
    """The fan file is not well-formed; carries the position when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class FanValidationError(ToricError):
    """Structural violations; the full report is kept on the exception."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"invalid fan: {lines}")


class HypothesisError(ToricError):
    """An operation was called on a fan that misses one of its hypotheses."""

    def __init__(self, hypothesis: str, message: str):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis '{hypothesis}' failed: {message}")


class ForeignObjectError(ToricError):
    """A wall, divisor or curve class does not belong to the given fan."""


class NotExtremalError(ToricError):
    pass


class ConsistencyError(RuntimeError):
    """Internal invariant broken. Never caused by valid input."""
