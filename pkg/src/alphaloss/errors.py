"""Exception hierarchy shared by all alphaloss modules.

Errors split along the axis that matters to callers: bad mathematical
inputs (DomainError), misuse of an API contract (UsageError), failures of
a numerical procedure itself (NumericError), and malformed input files
(ParseError). The CLI maps these onto distinct exit codes.
"""


class AlphaLossError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AlphaLossError, ValueError):
    """An input value lies outside the mathematical domain of an operation."""


class UsageError(AlphaLossError, ValueError):
    """An API contract was violated (shape mismatch, radius violation, ...)."""


class NumericError(AlphaLossError, ArithmeticError):
    """A numerical procedure failed (non-convergence, non-finite objective)."""


class ParseError(AlphaLossError, ValueError):
    """An input file is malformed; message carries the offending line."""
