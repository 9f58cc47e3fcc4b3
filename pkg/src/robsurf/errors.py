"""Exception hierarchy.

Every error carries a short category string; the CLI prints it as a
single-line ``category: message`` diagnostic and maps it to an exit code.
"""


class RobsurfError(Exception):
    """Base class for all toolkit errors."""

    category = "error"


class InputError(RobsurfError):
    """Invalid argument: bad index, dimension mismatch, out-of-range value."""

    category = "input"


class ParseError(InputError):
    """Malformed input file. Carries the offending line number when known."""

    category = "parse"

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class DomainError(RobsurfError):
    """Operation precondition violated (e.g. metric undefined on this graph)."""

    category = "domain"


class UndefinedMetricError(DomainError):
    """Metric has no defined value on this input (e.g. zero degree variance)."""

    category = "undefined-metric"


class ConfigurationError(RobsurfError):
    """Inconsistent run configuration or scenario/element-kind mismatch."""

    category = "config"


class DegenerateDataError(RobsurfError):
    """Data carries no usable variance; no principal direction exists."""

    category = "degenerate-data"


class NumericalError(RobsurfError):
    """A numerical routine failed to converge or produced unusable output."""

    category = "numeric"
