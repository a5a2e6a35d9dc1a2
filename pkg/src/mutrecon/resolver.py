"""Occurrence resolution: which same-line candidate did a mutation target.

A single candidate resolves immediately and the class file is never
consulted. With several candidates, the mutation's per-method instruction
index is ranked among same-line instructions of the rule's opcode family,
and that rank picks the candidate. The underlying assumption, validated
by the fixture corpus: left-to-right source order of same-family
operators on one line matches their bytecode emission order.
"""

from __future__ import annotations

from typing import Callable, Union

from .catalog import CandidateOccurrence, RewriteRule
from .classfile import ClassDebugInfo, MethodCode, occurrence_ordinal
from .errors import FailureCode, ReconstructionError
from .report import MutationRecord

ClassInfoSource = Union[ClassDebugInfo, Callable[[], ClassDebugInfo]]


def _find_method(info: ClassDebugInfo, record: MutationRecord) -> MethodCode:
    descriptor = record.method_descriptor or None
    matches = info.find_methods(record.mutated_method, descriptor)
    if not matches:
        raise ReconstructionError(
            FailureCode.METHOD_NOT_FOUND,
            f"{record.mutated_class}.{record.mutated_method}{record.method_descriptor or ''}",
        )
    if len(matches) > 1:
        # Name-only lookup hit overloads; guessing would silently
        # mis-resolve, so report instead.
        raise ReconstructionError(
            FailureCode.METHOD_NOT_FOUND,
            f"{record.mutated_class}.{record.mutated_method} is ambiguous "
            f"({len(matches)} overloads, no descriptor in report)",
        )
    return matches[0]


def resolve(
    candidates: list[CandidateOccurrence],
    record: MutationRecord,
    class_info: ClassInfoSource,
    rule: RewriteRule,
) -> CandidateOccurrence:
    """Pick the candidate occurrence the report entry refers to.

    `class_info` may be a parsed ClassDebugInfo or a zero-argument
    callable producing one; the callable form keeps class files unread on
    the single-candidate fast path.
    """
    if not candidates:
        raise ReconstructionError(
            FailureCode.NO_CANDIDATE_ON_LINE,
            f"no candidate for {rule.mutator} on line {record.line}",
        )
    if len(candidates) == 1:
        return candidates[0]

    info = class_info() if callable(class_info) else class_info
    method = _find_method(info, record)
    ordinal = occurrence_ordinal(method, record.line, rule.opcode_family, record.index)
    if ordinal is None:
        raise ReconstructionError(
            FailureCode.ORDINAL_UNRESOLVED,
            f"instruction index {record.index} is not a {rule.mutator} "
            f"occurrence on line {record.line} of {record.mutated_method}",
        )
    if ordinal >= len(candidates):
        raise ReconstructionError(
            FailureCode.ORDINAL_OUT_OF_RANGE,
            f"bytecode occurrence {ordinal} beyond {len(candidates)} source candidates",
        )
    return candidates[ordinal]
