"""mutrecon: reconstruct source-level mutants from bytecode mutation reports.

Takes the three artifacts a PIT run leaves behind - the XML report, the
compiled class files, and the original Java sources - and turns each
reported mutation back into a concrete source edit: method-level
original/mutated code pairs for datasets, and complete injected mutant
source files.
"""

from .catalog import (
    CandidateKind,
    CandidateOccurrence,
    OperatorCatalog,
    RewriteRule,
    apply_replacement,
    operator_short_name,
    rule_for,
)
from .classfile import (
    ClassDebugInfo,
    Instruction,
    MethodCode,
    decode_instructions,
    line_of,
    occurrence_ordinal,
    parse_class,
)
from .dataset_io import StatsTables, stats, write_csv, write_failures_csv, write_jsonl
from .errors import FailureCode, ReconstructionError
from .inject import InjectionSummary, InjectionTarget, build_predicate, inject_all, inject_one
from .javasrc import (
    MethodSpan,
    SourceUnit,
    Token,
    TokenKind,
    enclosing_span,
    extract_javadoc,
    find_candidates,
    lex,
    scan_method_spans,
)
from .layout import SystemLayout, discover
from .reconstruct import (
    DatasetRecord,
    ReconstructionFailure,
    generate_dataset,
    locate_source,
    reconstruct_one,
)
from .report import MutationRecord, parse_report
from .resolver import resolve

__version__ = "0.1.0"

__all__ = [
    "CandidateKind",
    "CandidateOccurrence",
    "ClassDebugInfo",
    "DatasetRecord",
    "FailureCode",
    "InjectionSummary",
    "InjectionTarget",
    "Instruction",
    "MethodCode",
    "MethodSpan",
    "MutationRecord",
    "OperatorCatalog",
    "ReconstructionError",
    "ReconstructionFailure",
    "RewriteRule",
    "SourceUnit",
    "StatsTables",
    "SystemLayout",
    "Token",
    "TokenKind",
    "apply_replacement",
    "build_predicate",
    "decode_instructions",
    "discover",
    "enclosing_span",
    "extract_javadoc",
    "find_candidates",
    "generate_dataset",
    "inject_all",
    "inject_one",
    "lex",
    "line_of",
    "locate_source",
    "occurrence_ordinal",
    "operator_short_name",
    "parse_class",
    "parse_report",
    "reconstruct_one",
    "resolve",
    "rule_for",
    "scan_method_spans",
    "stats",
    "write_csv",
    "write_failures_csv",
    "write_jsonl",
]
