"""Exception hierarchy for the fine-tuning harness.

ConfigError maps to the usage exit code, FormatError and
CheckpointError to the data exit code, and ResourceError wraps
out-of-memory failures with actionable guidance.
"""


class HarnessError(Exception):
    """Base class for all harness errors."""


class ConfigError(HarnessError):
    """A configuration file or value is invalid."""


class FormatError(HarnessError):
    """A dataset or transcript file violates its line format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CheckpointError(HarnessError):
    """A checkpoint directory is missing, incomplete or unreadable."""


class ResourceError(HarnessError):
    """Training or inference ran out of memory at the configured sizes."""
