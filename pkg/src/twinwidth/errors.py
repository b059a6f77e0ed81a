"""Shared exception types.

Everything raised on bad inputs or exceeded search budgets derives from
DomainError, so callers (notably the CLI) can distinguish domain failures
(exit code 1) from genuine bugs.
"""


class DomainError(Exception):
    """A precondition on the inputs does not hold."""


class FormatError(DomainError):
    """A text file does not conform to its documented format."""


class CapExceeded(DomainError):
    """An input is larger than the configured search budget allows."""


class BudgetExceeded(CapExceeded):
    """An evaluation ran past its operation budget."""


class ExtractionError(Exception):
    """A certificate extraction failed although its preconditions held.

    This signals a bug: the extractions implemented here are backed by
    constructive existence arguments and must succeed on valid inputs.
    """
