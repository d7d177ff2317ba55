"""Exception types shared by the library and the command line front end."""

from __future__ import annotations


class MacverError(Exception):
    """Base class for all library errors."""


class UsageError(MacverError, ValueError):
    """Bad arguments: wrong dimensions, illegal type labels, bad options."""


class DomainError(MacverError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(MacverError, RuntimeError):
    """A computation would exceed a configured size cap."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required
