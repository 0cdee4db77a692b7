"""Exception hierarchy.

Every error raised by this package derives from OwsurvError so callers can
catch the whole family. The CLI maps UsageError/ConfigurationError to exit
code 2 and everything else to exit code 1.
"""


class OwsurvError(Exception):
    """Base class for all package errors."""


class ConfigurationError(OwsurvError):
    """Bad configuration: missing columns, malformed option values."""


class DataError(OwsurvError):
    """Invalid data: missing cells, out-of-range values, empty arms."""


class ModelError(OwsurvError):
    """Model fitting failure: rank deficiency, non-convergence."""

    def __init__(self, message, last_params=None, score_norm=None):
        super().__init__(message)
        self.last_params = last_params
        self.score_norm = score_norm


class UsageError(OwsurvError):
    """API misuse: dimension mismatch, invalid argument."""


class EstimationError(OwsurvError):
    """Estimation impossible: zero weight mass, emptied arm after trimming."""


class PositivityError(EstimationError):
    """Propensity scores too close to 0/1 for inverse weighting."""

    def __init__(self, message, rows=None):
        super().__init__(message)
        self.rows = tuple(rows) if rows is not None else ()


class VarianceError(OwsurvError):
    """Variance estimation failure; point estimates remain valid."""
