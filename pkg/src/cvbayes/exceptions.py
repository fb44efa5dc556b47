"""Exception types shared across the package."""


class CvBayesError(Exception):
    """Base class for errors raised by cvbayes."""


class ValidationError(CvBayesError, ValueError):
    """Invalid input data, parameters or configuration."""


class UndefinedCvError(CvBayesError, ValueError):
    """The coefficient of variation is undefined (population mean is zero)."""


class DegenerateChainError(CvBayesError, ValueError):
    """A chain (or chain segment) is constant, so diagnostics are undefined."""


class MissingDataError(CvBayesError, FileNotFoundError):
    """A replication dataset is not available locally."""
