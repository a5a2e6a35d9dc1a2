"""Mutation-report XML parsing.

Reads the PIT mutation-report format: a <mutations> root whose <mutation>
children carry detected/status attributes and the sourceFile,
mutatedClass, mutatedMethod, methodDescription, lineNumber, mutator,
index, block, description and killingTest elements. Newer report
revisions that nest <indexes><index> / <blocks><block> are tolerated.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .catalog import operator_short_name

KNOWN_STATUSES = frozenset({"KILLED", "SURVIVED", "NO_COVERAGE", "TIMED_OUT"})

_REQUIRED_CHILDREN = ("sourceFile", "mutatedClass", "lineNumber", "mutator", "description", "index")


class MalformedReport(Exception):
    """Input is not a readable mutation report."""


class MissingField(Exception):
    def __init__(self, name: str, position: int):
        super().__init__(f"mutation #{position}: missing required element <{name}>")
        self.name = name
        self.position = position


@dataclass(frozen=True)
class MutationRecord:
    """One report entry, plus a synthetic stable id."""

    mutant_id: str
    source_file: str
    mutated_class: str
    mutated_method: str
    method_descriptor: str  # "" when the report omitted it
    line: int
    mutator: str
    description: str
    index: int
    block: int
    status: str
    detected: bool

    @property
    def status_is_known(self) -> bool:
        return self.status in KNOWN_STATUSES

    def report_fields(self) -> dict[str, str]:
        """The required report-element values this record was built from."""
        return {
            "sourceFile": self.source_file,
            "mutatedClass": self.mutated_class,
            "lineNumber": str(self.line),
            "mutator": self.mutator,
            "description": self.description,
            "index": str(self.index),
        }


def _child_text(elem: ET.Element, name: str) -> str | None:
    child = elem.find(name)
    if child is None:
        return None
    return child.text or ""


def _int_child(elem: ET.Element, name: str, position: int, *, plural: str | None = None) -> int | None:
    text = _child_text(elem, name)
    if text is None and plural is not None:
        nested = elem.find(f"{plural}/{name}")
        text = None if nested is None else (nested.text or "")
    if text is None:
        return None
    try:
        return int(text.strip())
    except ValueError:
        raise MalformedReport(f"mutation #{position}: <{name}> is not an integer: {text!r}") from None


def parse_report(report_bytes: bytes) -> list[MutationRecord]:
    """Parse report bytes into records, one per mutation element, in order.

    Unknown children are ignored; optional children (mutatedMethod,
    methodDescription, block, killingTest) may be absent. Synthetic
    mutant ids are deterministic: class:line:operator:index, with a
    `#n` suffix on the rare collision.
    """
    try:
        text = report_bytes.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedReport(f"report is not UTF-8: {exc}") from None
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedReport(f"report is not well-formed XML: {exc}") from None
    if root.tag != "mutations":
        raise MalformedReport(f"unexpected root element <{root.tag}>, expected <mutations>")

    records: list[MutationRecord] = []
    id_counts: dict[str, int] = {}
    for position, elem in enumerate(root.iter("mutation"), start=1):
        for name in ("sourceFile", "mutatedClass", "lineNumber", "mutator", "description"):
            if _child_text(elem, name) is None:
                raise MissingField(name, position)
        index = _int_child(elem, "index", position, plural="indexes")
        if index is None:
            raise MissingField("index", position)
        line = _int_child(elem, "lineNumber", position)
        block = _int_child(elem, "block", position, plural="blocks")

        source_file = (_child_text(elem, "sourceFile") or "").strip()
        mutated_class = (_child_text(elem, "mutatedClass") or "").strip()
        mutator = (_child_text(elem, "mutator") or "").strip()
        description = _child_text(elem, "description") or ""

        if line is None or line < 1:
            raise MalformedReport(f"mutation #{position}: lineNumber must be >= 1")
        if index < 0:
            raise MalformedReport(f"mutation #{position}: index must be >= 0")
        if block is not None and block < 0:
            raise MalformedReport(f"mutation #{position}: block must be >= 0")
        if not mutated_class or "/" in mutated_class or "\\" in mutated_class:
            raise MalformedReport(f"mutation #{position}: bad mutatedClass {mutated_class!r}")
        # sourceFile feeds directly into filesystem paths; a bare name only
        if "/" in source_file or "\\" in source_file or source_file in ("", ".", ".."):
            raise MalformedReport(f"mutation #{position}: bad sourceFile {source_file!r}")

        base_id = f"{mutated_class}:{line}:{operator_short_name(mutator)}:{index}"
        seen = id_counts.get(base_id, 0)
        id_counts[base_id] = seen + 1
        mutant_id = base_id if seen == 0 else f"{base_id}#{seen + 1}"

        records.append(
            MutationRecord(
                mutant_id=mutant_id,
                source_file=source_file,
                mutated_class=mutated_class,
                mutated_method=(_child_text(elem, "mutatedMethod") or "").strip(),
                method_descriptor=(_child_text(elem, "methodDescription") or "").strip(),
                line=line,
                mutator=mutator,
                description=description,
                index=index,
                block=block if block is not None else 0,
                status=(elem.get("status") or "UNKNOWN").strip(),
                detected=(elem.get("detected") or "false").strip().lower() == "true",
            )
        )
    return records
