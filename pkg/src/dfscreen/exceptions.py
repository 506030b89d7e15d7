"""Exception types shared across the package."""


class DFScreenError(Exception):
    """Base class for all errors raised by dfscreen."""


class ParameterError(DFScreenError, ValueError):
    """A scalar parameter is outside its valid range."""


class DataError(DFScreenError, ValueError):
    """Input data violates a contract (shape, domain, or standardization)."""


class DegeneracyError(DFScreenError):
    """A candidate column is numerically in the span of the current basis."""


class NumericalError(DFScreenError):
    """A numerical routine failed or produced an impossible value."""


class CsvError(DFScreenError):
    """A CSV file could not be parsed (missing cells, bad numerics, bad shape)."""


class ReplicationError(DFScreenError):
    """A method failed inside the Monte-Carlo harness; message carries the seed."""
