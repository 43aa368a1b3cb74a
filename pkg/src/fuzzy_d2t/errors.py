"""Exception hierarchy shared by the pipeline stages.

The CLI maps these to exit codes: ``ValidationError`` subclasses are bad
input (exit 2), ``InvariantError`` is an internal breach (exit 3).
"""


class D2TError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(D2TError):
    """Input, configuration or knowledge-base content is invalid."""


class DomainError(ValidationError, ValueError):
    """A degree or value lies outside its admissible domain."""


class KBParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(f"{message}{where}")


class KBValidationError(ValidationError):
    pass


class ObservationError(ValidationError):
    pass


class SeriesError(ValidationError):
    """Empty, misaligned or otherwise unusable data series."""


class LexicalizationError(D2TError):
    pass


class AggregationError(D2TError):
    pass


class AmbiguityError(D2TError):
    """No feature combination singles out the entity."""


class RealizationError(D2TError):
    pass


class LexiconMissError(RealizationError):
    pass


class InvariantError(D2TError):
    """A stage produced output that violates its own contract."""


class ConfigError(ValidationError):
    """Pipeline configuration names something the KB or data lacks."""
