"""
Exception hierarchy shared by every layer of the estimation toolkit.
"""


class OrdExpError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(OrdExpError, ValueError):
    """A scenario, scheme or loss failed validation."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.violations) or "validation failed")

    @classmethod
    def from_message(cls, message: str) -> 'ValidationError':
        from model.domain import ValidationReport
        return cls(ValidationReport(passed=False, violations=(message,)))


class PreconditionError(OrdExpError, ValueError):
    """A constant or estimator was evaluated outside its domain."""


class DegenerateInputError(OrdExpError, ValueError):
    """Input statistics make an estimator undefined (e.g. a zero spacing statistic)."""


class EstimatorMismatchError(OrdExpError, ValueError):
    """The estimator is not defined for the scenario kind."""


class UnknownTableError(OrdExpError, KeyError):
    """No built-in grid exists for the requested table id."""


class ResultsIOError(OrdExpError, OSError):
    """Result files could not be written."""
