"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented status codes without inspecting messages.
"""

from __future__ import annotations


class LfInflationError(Exception):
    exit_code = 1


class ConfigError(LfInflationError):
    exit_code = 2


class DataError(LfInflationError):
    exit_code = 3


class NumericError(LfInflationError):
    exit_code = 4


class RankDeficientError(NumericError):
    def __init__(self, message: str, columns: tuple[int, ...] = ()):
        super().__init__(message)
        self.columns = columns


class SingularMatrixError(NumericError):
    pass


class DegenerateSeriesError(NumericError):
    """Raised when a series has (numerically) zero variance."""


class SeriesWarning(UserWarning):
    """Point-wise diagnostic emitted when a transform produces a missing value."""
