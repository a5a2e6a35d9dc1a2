"""Dataset generation: every report entry becomes a record or a failure.

For each mutation: interpret the description through the operator
catalog, locate candidate tokens on the reported source line, let the
resolver pick the occurrence (consulting bytecode only when the line is
ambiguous), rewrite the line, slice the enclosing method, and attach the
Javadoc. Any problem along the way becomes exactly one typed failure, so
records plus failures always add up to the report size.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path, PurePosixPath

from . import javasrc
from .catalog import CandidateKind, DEFAULT_CATALOG, OperatorCatalog, apply_replacement
from .classfile import ClassDebugInfo, ClassFileError, parse_class
from .errors import FailureCode, ReconstructionError
from .javasrc import LexError, SourceUnit, UnbalancedBraces
from .layout import SystemLayout
from .report import MutationRecord, parse_report
from .resolver import ClassInfoSource, resolve


@dataclass(frozen=True)
class DatasetRecord:
    """One original/mutated method pair with its mutation metadata."""

    mutant_id: str
    orig_method: str
    mut_method: str
    javadoc: str | None
    class_name: str
    source_path: str  # relative to the sources root, POSIX separators
    line: int
    mutator: str
    description: str
    index: int
    original_line: str
    mutated_line: str


@dataclass(frozen=True)
class ReconstructionFailure:
    mutant_id: str
    code: FailureCode
    detail: str
    mutator: str
    source_file: str
    line: int
    index: int

    @classmethod
    def of(cls, record: MutationRecord, code: FailureCode, detail: str) -> "ReconstructionFailure":
        return cls(
            mutant_id=record.mutant_id,
            code=code,
            detail=detail,
            mutator=record.mutator,
            source_file=record.source_file,
            line=record.line,
            index=record.index,
        )


def locate_source(sources_root: Path, record: MutationRecord) -> Path:
    """Resolve a record's source file under the package directory tree."""
    outer_class = record.mutated_class.split("$", 1)[0]
    package, _, _ = outer_class.rpartition(".")
    relative = PurePosixPath(*package.split(".")) if package else PurePosixPath()
    path = Path(sources_root) / relative / record.source_file
    if not path.is_file():
        raise ReconstructionError(FailureCode.SOURCE_FILE_NOT_FOUND, str(path))
    return path


def reconstruct_one(
    record: MutationRecord,
    unit: SourceUnit,
    class_info: ClassInfoSource,
    catalog: OperatorCatalog = DEFAULT_CATALOG,
    *,
    source_path: str = "",
) -> DatasetRecord | ReconstructionFailure:
    """Reconstruct one mutation against its already-loaded source unit."""
    try:
        rule = catalog.rule_for(record.mutator, record.description)

        if record.line > len(unit.lines):
            raise ReconstructionError(
                FailureCode.NO_CANDIDATE_ON_LINE,
                f"line {record.line} beyond end of file ({len(unit.lines)} lines)",
            )
        line_text = unit.line(record.line)

        if rule.candidate_kind is CandidateKind.SWITCH_LABEL:
            occurrence, replacement = javasrc.switch_label_rewrite(unit, record.line)
            rule = replace(rule, replacement_text=replacement)
            candidates = [occurrence]
        else:
            candidates = javasrc.find_candidates(line_text, rule, line_no=record.line)
            if not candidates:
                raise ReconstructionError(
                    javasrc.classify_no_candidate(line_text, rule),
                    f"{rule.mutator} has no candidate on line {record.line}: {line_text.strip()!r}",
                )

        occurrence = resolve(candidates, record, class_info, rule)
        mutated_line = apply_replacement(line_text, occurrence, rule)

        span = javasrc.enclosing_span(unit.method_spans, record.line)
        if span is None:
            raise ReconstructionError(
                FailureCode.NO_ENCLOSING_METHOD,
                f"line {record.line} is outside every method span",
            )

        orig_method = "\n".join(unit.lines[span.start_line - 1 : span.end_line])
        body = unit.lines[span.start_line - 1 : span.end_line]
        body[record.line - span.start_line] = mutated_line
        mut_method = "\n".join(body)

        return DatasetRecord(
            mutant_id=record.mutant_id,
            orig_method=orig_method,
            mut_method=mut_method,
            javadoc=javasrc.extract_javadoc(unit, span.start_line),
            class_name=record.mutated_class,
            source_path=source_path or record.source_file,
            line=record.line,
            mutator=record.mutator,
            description=record.description,
            index=record.index,
            original_line=line_text,
            mutated_line=mutated_line,
        )
    except ReconstructionError as exc:
        return ReconstructionFailure.of(record, exc.code, exc.detail)


class CorpusCache:
    """Per-run memo of parsed source units and class files."""

    def __init__(self, layout: SystemLayout):
        self.layout = layout
        self._units: dict[Path, SourceUnit | ReconstructionError] = {}
        self._classes: dict[str, ClassDebugInfo | ReconstructionError] = {}

    def unit(self, path: Path) -> SourceUnit:
        cached = self._units.get(path)
        if cached is None:
            try:
                cached = SourceUnit.from_bytes(path.read_bytes(), path=str(path))
            except LexError as exc:
                cached = ReconstructionError(FailureCode.LEX_ERROR, str(exc))
            except UnbalancedBraces as exc:
                # No dedicated failure code for structural scan problems.
                cached = ReconstructionError(FailureCode.LEX_ERROR, str(exc))
            except UnicodeDecodeError as exc:
                cached = ReconstructionError(FailureCode.LEX_ERROR, f"not UTF-8: {exc}")
            self._units[path] = cached
        if isinstance(cached, ReconstructionError):
            raise cached
        return cached

    def class_info(self, class_name: str) -> ClassDebugInfo:
        cached = self._classes.get(class_name)
        if cached is None:
            path = self.layout.classes_root / Path(*class_name.split(".")[:-1]) / (
                class_name.split(".")[-1] + ".class"
            )
            if not path.is_file():
                cached = ReconstructionError(FailureCode.CLASS_FILE_NOT_FOUND, str(path))
            else:
                try:
                    cached = parse_class(path.read_bytes())
                except ClassFileError as exc:
                    cached = ReconstructionError(
                        FailureCode.CLASS_FILE_NOT_FOUND, f"{path}: {exc}"
                    )
            self._classes[class_name] = cached
        if isinstance(cached, ReconstructionError):
            raise cached
        return cached

    def class_loader(self, class_name: str):
        return lambda: self.class_info(class_name)


def _record_sort_key(item: DatasetRecord) -> tuple:
    return (item.source_path, item.line, item.index, item.mutant_id)


def _failure_sort_key(item: ReconstructionFailure) -> tuple:
    return (item.source_file, item.line, item.index, item.mutant_id)


def process_records(
    records: list[MutationRecord],
    cache: CorpusCache,
    catalog: OperatorCatalog = DEFAULT_CATALOG,
    jobs: int = 1,
) -> tuple[list[DatasetRecord], list[ReconstructionFailure]]:
    """Run reconstruction for parsed records against a cached corpus.

    Records are grouped by source file; groups run in parallel when jobs
    exceeds one. Output order and duplicate suppression are deterministic
    regardless of parallelism: duplicates are decided in document order
    within each file, and results are sorted afterwards.
    """
    sources_root = cache.layout.sources_root
    groups: dict[str, list[tuple[MutationRecord, Path]]] = {}
    failures: list[ReconstructionFailure] = []

    for record in records:
        try:
            path = locate_source(sources_root, record)
        except ReconstructionError as exc:
            failures.append(ReconstructionFailure.of(record, exc.code, exc.detail))
            continue
        groups.setdefault(str(path), []).append((record, path))

    def run_group(items: list[tuple[MutationRecord, Path]]):
        group_records: list[DatasetRecord] = []
        group_failures: list[ReconstructionFailure] = []
        seen_edits: set[tuple[str, int, str]] = set()
        for record, path in items:
            try:
                rel = path.resolve().relative_to(Path(sources_root).resolve())
                source_path = rel.as_posix()
            except ValueError:
                source_path = path.as_posix()
            try:
                unit = cache.unit(path)
            except ReconstructionError as exc:
                group_failures.append(ReconstructionFailure.of(record, exc.code, exc.detail))
                continue
            result = reconstruct_one(
                record,
                unit,
                cache.class_loader(record.mutated_class),
                catalog,
                source_path=source_path,
            )
            if isinstance(result, DatasetRecord):
                key = (result.source_path, result.line, result.mutated_line)
                if key in seen_edits:
                    group_failures.append(
                        ReconstructionFailure.of(
                            record,
                            FailureCode.DUPLICATE_EDIT,
                            f"identical edit already produced for line {record.line}",
                        )
                    )
                    continue
                seen_edits.add(key)
                group_records.append(result)
            else:
                group_failures.append(result)
        return group_records, group_failures

    ordered_groups = list(groups.values())
    dataset: list[DatasetRecord] = []
    if jobs > 1 and len(ordered_groups) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_group, ordered_groups))
    else:
        results = [run_group(g) for g in ordered_groups]
    for group_records, group_failures in results:
        dataset.extend(group_records)
        failures.extend(group_failures)

    dataset.sort(key=_record_sort_key)
    failures.sort(key=_failure_sort_key)
    return dataset, failures


def generate_dataset(
    system: SystemLayout,
    catalog: OperatorCatalog = DEFAULT_CATALOG,
    jobs: int = 1,
) -> tuple[list[DatasetRecord], list[ReconstructionFailure]]:
    """Phase 1: report in, (records, failures) out; conservation holds."""
    records = parse_report(system.report_path.read_bytes())
    cache = CorpusCache(system)
    return process_records(records, cache, catalog, jobs=jobs)
