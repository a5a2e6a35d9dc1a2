"""Failure vocabulary shared by the reconstruction pipeline.

Per-mutation problems never abort a run: they are raised as
ReconstructionError inside one mutation's processing and converted into a
typed failure row by the pipeline. Structural problems with the inputs
themselves (a corrupt report, an unwritable output root) use ordinary
module-specific exceptions and are fatal.
"""

from __future__ import annotations

from enum import Enum


class FailureCode(str, Enum):
    """Reason a single mutation could not be reconstructed."""

    NO_CANDIDATE_ON_LINE = "NoCandidateOnLine"
    DUPLICATE_EDIT = "DuplicateEdit"
    UNRECOGNIZED_DESCRIPTION = "UnrecognizedDescription"
    UNKNOWN_MUTATOR = "UnknownMutator"
    NO_ENCLOSING_METHOD = "NoEnclosingMethod"
    METHOD_NOT_FOUND = "MethodNotFound"
    ORDINAL_UNRESOLVED = "OrdinalUnresolved"
    ORDINAL_OUT_OF_RANGE = "OrdinalOutOfRange"
    MULTI_LINE_EXPRESSION = "MultiLineExpression"
    UNSUPPORTED_SWITCH_SHAPE = "UnsupportedSwitchShape"
    SOURCE_FILE_NOT_FOUND = "SourceFileNotFound"
    CLASS_FILE_NOT_FOUND = "ClassFileNotFound"
    LEX_ERROR = "LexError"


class ReconstructionError(Exception):
    """A typed, per-mutation failure; callers turn it into a failure row."""

    def __init__(self, code: FailureCode, detail: str = ""):
        super().__init__(f"{code.value}: {detail}" if detail else code.value)
        self.code = code
        self.detail = detail
