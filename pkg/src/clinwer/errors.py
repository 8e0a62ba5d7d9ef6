"""Exception types shared across the toolkit.

The command line maps these onto exit codes: usage problems exit with 1,
data and precondition problems with 2, I/O problems with 3.
"""

from __future__ import annotations


class ClinwerError(Exception):
    """Base class for all toolkit errors."""


class UsageError(ClinwerError):
    """Bad command line invocation (unknown flag, missing required option)."""


class DataError(ClinwerError):
    """Invalid input data or a violated operation precondition."""


class FormatError(DataError):
    """A record file does not conform to its line-delimited schema."""

    def __init__(self, message: str, *, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateUtterance(DataError):
    """The same (file id, utterance index, system) appears twice."""


class DuplicateRecord(DataError):
    """The same record identifier appears twice in an abstract corpus."""


class EmptyAfterCleaning(DataError):
    """Cleaning removed every character; the record must be dropped."""


class EmptyCorpus(DataError):
    """An operation that needs at least one record was given none."""


class EmptyReference(DataError):
    """A reference utterance has no words, so it cannot be scored."""


class UnknownPmid(DataError):
    """A paraphrase mapping names a record id absent from the corpus."""


class TooFewExamples(DataError):
    """A train/eval split needs at least two examples."""


class EmptyResults(DataError):
    """Chart data emission was asked to write an empty result set."""
