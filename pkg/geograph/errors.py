"""Custom domain exceptions for the library, the CLI and the HTTP API."""

# Stable, machine-readable error codes for report and API consumers.
FORMAT_ERROR = "FORMAT_ERROR"
PARAM_ERROR = "PARAM_ERROR"
SHAPE_ERROR = "SHAPE_ERROR"
TRAINING_ERROR = "TRAINING_ERROR"
DEGENERATE = "DEGENERATE"
CORRELATION_UNDEFINED = "CORRELATION_UNDEFINED"
CONNECTIVITY_ERROR = "CONNECTIVITY_ERROR"
CONFIG_ERROR = "CONFIG_ERROR"

# CLI exit codes.
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_TRAINING = 4


class GeographError(Exception):
    """Base exception for domain errors."""

    code = "GEOGRAPH_ERROR"
    exit_code = EXIT_FAILURE


class FormatError(GeographError):
    """Raised when an input file or matrix is malformed (bad cell, wrong shape, NaN/Inf)."""

    code = FORMAT_ERROR
    exit_code = EXIT_DATA


class ParamError(GeographError):
    """Raised when a parameter is outside its valid range."""

    code = PARAM_ERROR
    exit_code = EXIT_CONFIG


class ShapeError(GeographError):
    """Raised when matrix shapes do not agree."""

    code = SHAPE_ERROR
    exit_code = EXIT_DATA


class TrainingError(GeographError):
    """Raised when GCN training diverges."""

    code = TRAINING_ERROR
    exit_code = EXIT_TRAINING

    def __init__(self, message: str, epoch: int | None = None):
        super().__init__(message)
        self.epoch = epoch

    def __reduce__(self):
        # keep the epoch when crossing a process boundary
        return (type(self), (str(self), self.epoch))


class DegenerateError(GeographError):
    """Raised when a diagnostic is undefined on the input (zero variance, coincident classes)."""

    code = DEGENERATE


class CorrelationUndefined(GeographError):
    """Raised when a Pearson correlation involves a constant vector."""

    code = CORRELATION_UNDEFINED


class ConnectivityError(GeographError):
    """Raised when an operation requires a connected graph."""

    code = CONNECTIVITY_ERROR


class ConfigError(GeographError):
    """Raised when the experiment configuration cannot be loaded or validated."""

    code = CONFIG_ERROR
    exit_code = EXIT_CONFIG
