"""Exception hierarchy. Every error is a ValueError carrying a message that names the violated constraint."""


class QSeriesError(ValueError):
    pass


class NotAUnit(QSeriesError):
    """Lowest coefficient of a series is not +1 or -1, so it has no integer inverse."""


class OutOfRange(QSeriesError):
    """Requested exponent is at or beyond the truncation order."""


class InvalidSpec(QSeriesError):
    pass


class InvalidParams(QSeriesError):
    pass


class Degenerate(QSeriesError):
    """The product contains a factor (q^0; q^M) and is identically zero."""


class TooLarge(QSeriesError):
    pass


class ConfigError(QSeriesError):
    pass


class SpecSyntaxError(QSeriesError):
    """A command-line factor or range string could not be parsed."""
