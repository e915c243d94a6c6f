"""Exception types shared by every module.

The CLI maps these onto exit codes: ``CapacityError`` -> 3, ``DomainError``
and ``PrecisionError`` -> 2 (usage), anything else propagates.
"""


class ExplicitBVError(Exception):
    """Base class for library errors."""


class CapacityError(ExplicitBVError):
    """A request exceeds the sieve limit, a memory cap or a cost budget."""

    def __init__(self, message, *, requested=None, limit=None, estimate=None):
        super().__init__(message)
        self.requested = requested
        self.limit = limit
        self.estimate = estimate


class DomainError(ExplicitBVError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SearchLimitError(ExplicitBVError):
    """A bounded search ran out of room before finding its target."""

    def __init__(self, message, *, ceiling):
        super().__init__(message)
        self.ceiling = ceiling


class PrecisionError(ExplicitBVError, ValueError):
    """Requested truncation is too coarse for the advertised error radius."""
