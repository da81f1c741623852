"""Exception hierarchy.

The CLI maps these onto exit codes: parse failures exit 2, data-degeneracy
failures exit 3, usage problems exit 4.
"""

from __future__ import annotations


class ConsilienceError(Exception):
    """Base class for all library errors."""


class ParseError(ConsilienceError):
    """Malformed input file (bad cell, half-present pair, bad structure).

    Carries optional ``case_id`` / ``series`` context so messages can point
    at the offending row.
    """

    def __init__(self, message: str, *, case_id: str | None = None,
                 series: str | None = None):
        where = []
        if series is not None:
            where.append(f"series {series!r}")
        if case_id is not None:
            where.append(f"case {case_id!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.case_id = case_id
        self.series = series


class DegenerateDataError(ConsilienceError):
    """Data that parses fine but cannot be analyzed (too few pairs, etc.)."""


class DegenerateObservedError(DegenerateDataError):
    """Observed series has zero variance; the projection regression and the
    spread-based scalars are undefined."""


class DegenerateScalarError(DegenerateDataError):
    """The requested scalar evaluates to zero, so errors cannot be scaled."""


class DegenerateSeriesError(DegenerateDataError):
    """A series (or an overlap of two series) is constant where a
    correlation is required."""


class InsufficientOverlapError(DegenerateDataError):
    """Two case-matched series share fewer overlapping pairs than the
    minimum needed for a pairwise correlation."""


class UntabulatedAlphaError(ConsilienceError, ValueError):
    """Significance level not in the tabulated critical-value family."""
