"""
Exception hierarchy for Dowkernet.

Each error class carries the process exit code the CLI reports for it:

  1  usage        bad flags or configuration
  2  parse        unreadable or malformed input
  3  domain       input violates an operation's preconditions
  4  convergence  an iterative solver did not settle
"""
from typing import Optional


class DowkerError(Exception):
    """Base class for all Dowkernet errors."""

    exit_code = 1


class UsageError(DowkerError):
    exit_code = 1


class ParseError(DowkerError):
    """Malformed input; ``line`` is 1-based when known."""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEdgeError(ParseError):
    pass


class ShapeError(ParseError):
    pass


class LabelError(ParseError):
    pass


class DomainError(DowkerError, ValueError):
    exit_code = 3


class NodeLookupError(DomainError, KeyError):
    def __str__(self) -> str:
        # KeyError would otherwise repr() the message
        return str(self.args[0]) if self.args else ""


class EmptyNetworkError(DomainError):
    pass


class DimensionError(DomainError):
    pass


class SizeError(DomainError):
    pass


class ConvergenceError(DowkerError):
    exit_code = 4

    def __init__(self, message: str, residual: float = float("nan"), iterations: int = 0):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"{message} (residual {residual:.3e} after {iterations} iterations)")
