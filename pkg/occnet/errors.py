"""
Shared exception hierarchy.
Every error carries the process exit code the CLI should return for it.
"""

from typing import Optional


class OccnetError(Exception):
    """Base class for all expected failures."""

    exit_code = 4


class ConfigError(OccnetError):
    """Invalid or incomplete run configuration (bad path, out-of-range value)."""

    exit_code = 2


class DataError(OccnetError):
    """Input data that cannot be processed."""

    exit_code = 3


class ParseError(DataError):
    pass


class EmbeddingFormatError(DataError):
    """Malformed word-vector file. `line` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GraphError(DataError):
    pass


class LabelError(DataError):
    pass


class TrainingDataError(DataError):
    pass


class RegressionError(DataError):
    pass


class StageError(OccnetError):
    """
    Wraps a failure with the pipeline stage it happened in.

    The exit code of the wrapped error is kept; unexpected exceptions map to 4.
    """

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 4)
