"""Exception types raised by slot_pricer."""

from __future__ import annotations


class ValidationError(ValueError):
    """Input data violates a structural invariant (unsorted times, bad densities, ...).

    ``path`` locates the offending field inside an instance file, e.g.
    ``("slots", 2, "t")``; the loader turns it into a line number.
    """

    def __init__(self, message: str, path: tuple = ()):
        super().__init__(message)
        self.path = path


class ModeError(ValueError):
    """An operation was requested in a regime the instance does not support."""
