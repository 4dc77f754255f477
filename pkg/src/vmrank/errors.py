"""Exception types raised across the toolkit.

Everything user-facing derives from VmRankError so the CLI and the HTTP
service can map failures to exit codes / status codes in one place.
"""

from __future__ import annotations


class VmRankError(Exception):
    """Base class for all toolkit errors."""


class DataFormatError(VmRankError):
    """A document could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class EmptyInputError(DataFormatError):
    """The document contained no records at all."""


class UnknownFixtureError(VmRankError):
    """Requested a bundled fixture that does not exist."""


class ExtractionError(VmRankError):
    """An extraction spec is invalid or could not be applied."""


class NoRuleMatchedError(ExtractionError):
    """No extraction rule matched the raw text (wrong spec/tool pairing)."""


class IncompleteMatrixError(VmRankError):
    """Aggregation found (vm, attribute) cells with no observations."""

    def __init__(self, missing: list[tuple[str, str]]):
        self.missing = sorted(missing)
        preview = ", ".join(f"{vm}/{attr}" for vm, attr in self.missing[:5])
        more = "" if len(self.missing) <= 5 else f" (+{len(self.missing) - 5} more)"
        super().__init__(f"{len(self.missing)} empty cells: {preview}{more}")


class MissingGroupError(VmRankError):
    """A group carries nonzero weight but contains no attributes."""


class DegenerateRanksError(VmRankError):
    """A rank vector has zero variance; correlation is undefined."""


class PipelineError(VmRankError):
    """Wraps a failure inside the ranking pipeline with its stage name."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        super().__init__(f"{stage}: {cause}")
        self.__cause__ = cause
