"""Typed errors shared across the package.

Exit-code contract for the CLI: DomainError -> 1, CapExceeded -> 2,
AmbiguousCase -> 3, malformed command line -> 64.
"""


class EndotrivError(Exception):
    """Base class for all package errors."""


class DomainError(EndotrivError):
    """Input outside the declared domain (bad prime, invalid orders, ...)."""

    exit_code = 1


class CapExceeded(EndotrivError):
    """An enumeration would exceed the configured element cap."""

    exit_code = 2

    def __init__(self, message, needed=None, cap=None):
        super().__init__(message)
        self.needed = needed
        self.cap = cap


class AmbiguousCase(EndotrivError):
    """A parameter tuple matching no clause of the governing case split.

    Raised instead of guessing; carries the offending tuple for reporting.
    """

    exit_code = 3

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail or {}


class GroupSpecError(EndotrivError):
    """Malformed group specification string (maps to usage exit code)."""

    exit_code = 64
