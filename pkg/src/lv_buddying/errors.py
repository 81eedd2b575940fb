"""Error types raised by the buddying library.

Every failure the library raises on purpose derives from :class:`BuddyingError`, so the CLI
can turn it into a machine-readable error payload and a data-error exit code.
"""

from __future__ import annotations

from pathlib import Path


class BuddyingError(Exception):
    """Base class for all library errors."""


class InvalidInputError(BuddyingError, ValueError):
    """An argument violates an operation's precondition."""


class AlignmentError(BuddyingError, ValueError):
    """Series that must share a time axis do not."""


class SchemaError(BuddyingError, ValueError):
    """A CSV file does not parse under its expected schema.

    ``row`` is the 1-based data row (header excluded) when the failure is row-specific.
    """

    def __init__(self, path: Path, row: int | None, reason: str) -> None:
        where = f"{path}" if row is None else f"{path}:{row}"
        super().__init__(f"Schema error at {where}: {reason}")
        self.path = path
        self.row = row
        self.reason = reason


class UnrecoverableSeriesError(BuddyingError, ValueError):
    """A series has no valid reading to impute from."""


class WindowRangeError(BuddyingError, ValueError):
    """A requested date window lies outside the series."""


class GroupingError(BuddyingError, ValueError):
    """A customer cannot be grouped, or its group has no candidate profiles."""


class DegenerateNormalizationError(BuddyingError, ValueError):
    """A normalisation total (S, D or a peak) is zero."""


class ConfigurationError(BuddyingError, ValueError):
    """Inputs are inconsistent with the requested method or run configuration."""


class FitError(BuddyingError, ValueError):
    """A power-law fit cannot be computed from the given points."""


class SplitError(BuddyingError, ValueError):
    """A profile pool cannot be split into populate/buddy halves."""


class CoverageError(BuddyingError, ValueError):
    """Data does not cover what a sweep cell or comparison needs."""
