"""Numerical verification of explicit Bombieri-Vinogradov type bounds."""

from .errors import CapacityError, DomainError, PrecisionError, SearchLimitError

__all__ = ["CapacityError", "DomainError", "PrecisionError", "SearchLimitError"]
__version__ = "0.1.0"
