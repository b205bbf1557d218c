"""Exception types shared across the package.

Every error raised by the library derives from :class:`RecordMleError`, so
callers can catch one base class at API boundaries. The CLI maps these to
exit code 2 (usage or configuration problems).
"""

from __future__ import annotations


class RecordMleError(Exception):
    """Base class for all library errors."""


class DomainError(RecordMleError, ValueError):
    """A parameter or evaluation point lies outside its admissible domain."""


class ArgumentError(RecordMleError, ValueError):
    """A structurally invalid argument: empty input, NaN, size below the
    minimum a formula is defined for, or a malformed family string."""


class DegenerateSampleError(ArgumentError):
    """The sufficient statistic is zero (all observations sit at the lower
    support endpoint), so the likelihood has no interior maximum."""


class EstimatorRangeError(RecordMleError, ValueError):
    """The target value for the inverse parameter map lies outside the range
    of B on the parameter domain; carries the offending value in args."""


class DivergenceError(RecordMleError, ArithmeticError):
    """Adaptive quadrature signalled divergence on a target whose exact
    value must exist; carries the last refinement totals in args."""


class RecordCapError(RecordMleError, RuntimeError):
    """Sequential record simulation exceeded its base-draw cap before
    producing the requested number of records."""


class ReplicationFailureError(RecordMleError, RuntimeError):
    """More than 1% of Monte Carlo replications failed; the run result
    would not be trustworthy."""
