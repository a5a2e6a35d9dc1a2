"""Source-level mutant injection at four granularities.

Writes complete mutant source files: the original file with exactly the
reported line replaced by the reconstructed edit, indentation and line
endings preserved byte-for-byte. Selection runs over the same
reconstruction results as dataset generation, so the injectable set is
exactly the set of Phase-1 successes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .catalog import DEFAULT_CATALOG, OperatorCatalog, operator_short_name
from .javasrc import SourceUnit, lex, LexError
from .layout import SystemLayout
from .reconstruct import CorpusCache, DatasetRecord, locate_source, process_records
from .report import MutationRecord, parse_report

MANIFEST_NAME = "manifest.jsonl"

_MODES = ("mutation", "statement", "class", "system")


class InvalidTarget(Exception):
    """Selector/mode mismatch in an injection target."""


class WriteFailed(Exception):
    def __init__(self, path: Path, cause: BaseException):
        super().__init__(f"failed to write {path}: {cause}")
        self.path = path


class ValidityCheckFailed(Exception):
    """Written mutant file does not tokenize; file stays on disk, flagged."""

    def __init__(self, path: Path, lex_error: LexError):
        super().__init__(f"{path}: {lex_error}")
        self.path = path
        self.lex_error = lex_error


@dataclass(frozen=True)
class InjectionTarget:
    mode: str  # mutation | statement | class | system
    mutant_id: str | None = None
    class_name: str | None = None
    line: int | None = None

    def validate(self) -> None:
        if self.mode not in _MODES:
            raise InvalidTarget(f"unknown mode {self.mode!r}")
        if self.mode == "mutation" and not self.mutant_id:
            raise InvalidTarget("mutation mode requires a mutant id")
        if self.mode == "statement" and (not self.class_name or self.line is None):
            raise InvalidTarget("statement mode requires a class name and a line")
        if self.mode == "class" and not self.class_name:
            raise InvalidTarget("class mode requires a class name")
        if self.mode == "system" and (self.mutant_id or self.class_name or self.line is not None):
            raise InvalidTarget("system mode takes no selector")


def _class_matches(selector: str, mutated_class: str) -> bool:
    # Inner classes belong to their outer class's selection.
    return mutated_class == selector or mutated_class.startswith(selector + "$")


def build_predicate(target: InjectionTarget) -> Callable[[MutationRecord], bool]:
    """Pure record filter implementing the four injection granularities."""
    target.validate()
    if target.mode == "system":
        return lambda record: True
    if target.mode == "mutation":
        wanted = target.mutant_id
        return lambda record: record.mutant_id == wanted
    if target.mode == "class":
        selector = target.class_name or ""
        return lambda record: _class_matches(selector, record.mutated_class)
    selector = target.class_name or ""
    line = target.line
    return lambda record: _class_matches(selector, record.mutated_class) and record.line == line


def reindent(original_line: str, mutated_line: str) -> str:
    """Reapply the original line's leading whitespace to the mutated text."""
    prefix_len = len(original_line) - len(original_line.lstrip(" \t"))
    return original_line[:prefix_len] + mutated_line.lstrip(" \t")


def mutant_output_dir(out_root: Path, record: MutationRecord) -> Path:
    """out(c, l, i): one directory per mutant, so each compiles in isolation."""
    class_dir = Path(*record.mutated_class.split("."))
    leaf = f"L{record.line}_I{record.index}_{operator_short_name(record.mutator)}"
    return Path(out_root) / class_dir / leaf


def inject_one(
    unit: SourceUnit,
    record: MutationRecord,
    resolved_line: str,
    out_root: Path,
) -> Path:
    """Write one full mutant file; returns the written path.

    Raises ValidityCheckFailed after writing when the result no longer
    tokenizes; raises WriteFailed when the file cannot be written at all.
    """
    original = unit.line(record.line)
    mutated = reindent(original, resolved_line)
    content = unit.render_bytes(replace={record.line: mutated})
    path = mutant_output_dir(Path(out_root), record) / record.source_file
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(content)
    except OSError as exc:
        raise WriteFailed(path, exc) from exc
    try:
        lex(content.decode("utf-8", errors="replace").lstrip("﻿"))
    except LexError as exc:
        raise ValidityCheckFailed(path, exc) from exc
    return path


@dataclass
class InjectionSummary:
    written: int = 0
    validity_failures: int = 0
    reconstruction_failures: int = 0
    filtered_out: int = 0
    manifest_path: Path | None = None
    entries: list[dict] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.written + self.reconstruction_failures + self.filtered_out


def inject_all(
    system: SystemLayout,
    target: InjectionTarget,
    out_root: str | Path,
    catalog: OperatorCatalog = DEFAULT_CATALOG,
    jobs: int = 1,
) -> InjectionSummary:
    """Phase 2: reconstruct everything, filter, and write mutant files.

    Reconstruction (including duplicate suppression) always runs over the
    full report so the injectable set equals the Phase-1 success set;
    the predicate only decides what gets written.
    """
    out_root = Path(out_root)
    predicate = build_predicate(target)
    records = parse_report(system.report_path.read_bytes())
    cache = CorpusCache(system)
    dataset, _failures = process_records(records, cache, catalog, jobs=jobs)
    successes: dict[str, DatasetRecord] = {r.mutant_id: r for r in dataset}

    summary = InjectionSummary()
    ordered = sorted(
        records,
        key=lambda r: (r.source_file, r.line, r.index, r.mutant_id),
    )
    for record in ordered:
        if not predicate(record):
            summary.filtered_out += 1
            continue
        row = successes.get(record.mutant_id)
        if row is None:
            summary.reconstruction_failures += 1
            continue
        unit = cache.unit(locate_source(system.sources_root, record))
        status = "ok"
        try:
            path = inject_one(unit, record, row.mutated_line, out_root)
        except ValidityCheckFailed as exc:
            path = exc.path
            status = "lex-failed"
            summary.validity_failures += 1
        summary.written += 1
        summary.entries.append(
            {
                "mutant_id": record.mutant_id,
                "path": path.relative_to(out_root).as_posix(),
                "status": status,
            }
        )

    if summary.written:
        manifest = out_root / MANIFEST_NAME
        with manifest.open("w", encoding="utf-8", newline="\n") as fh:
            for entry in summary.entries:
                fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
        summary.manifest_path = manifest
    return summary
