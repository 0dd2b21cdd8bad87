"""
Exception types shared by the audit modules.

All of them derive from the built-in exception a caller would expect
(ValueError for bad input, RuntimeError for a construction that did not
behave), so plain ``except ValueError`` handlers keep working.
"""


class SequenceFormatError(ValueError):
    """A sequence, run length encoding or their text form is malformed."""


class DomainError(ValueError):
    """An operation was called outside the range where it is defined."""


class PremiseError(ValueError):
    """The premise of Theorem 1 does not hold where it is required."""


class CapacityError(ValueError):
    """A search was requested beyond the configured length bound."""


class RecordMismatchError(ValueError):
    """A stored counterexample record disagrees with its re-audit."""

    def __init__(self, message: str, expected=None, observed=None):
        super().__init__(message)
        self.expected = expected
        self.observed = observed


class FalsificationError(RuntimeError):
    """A construction expected to contradict Theorem 1 (iv) did not."""
