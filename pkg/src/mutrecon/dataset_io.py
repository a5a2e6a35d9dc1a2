"""Dataset serialization (CSV / JSON lines) and statistics tables.

Outputs are reproducible byte-for-byte: UTF-8, "\\n" line endings on every
platform, fixed header order, and half-up percentages at two decimals.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .catalog import operator_short_name
from .reconstruct import DatasetRecord, ReconstructionFailure

CSV_HEADER = [
    "mutant_id",
    "class",
    "source_path",
    "line",
    "mutator",
    "description",
    "index",
    "original_line",
    "mutated_line",
    "javadoc",
    "orig_method",
    "mut_method",
]

FAILURES_HEADER = ["mutant_id", "mutator", "code", "detail"]


class WriteFailed(Exception):
    def __init__(self, path: str, cause: BaseException):
        super().__init__(f"failed to write {path}: {cause}")


def record_row(record: DatasetRecord) -> dict[str, str]:
    return {
        "mutant_id": record.mutant_id,
        "class": record.class_name,
        "source_path": record.source_path,
        "line": str(record.line),
        "mutator": record.mutator,
        "description": record.description,
        "index": str(record.index),
        "original_line": record.original_line,
        "mutated_line": record.mutated_line,
        "javadoc": record.javadoc or "",
        "orig_method": record.orig_method,
        "mut_method": record.mut_method,
    }


def _open_out(out: str | Path | TextIO):
    if hasattr(out, "write"):
        return out, False
    try:
        return open(out, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise WriteFailed(str(out), exc) from exc


def write_csv(records: Sequence[DatasetRecord], out: str | Path | TextIO) -> None:
    """RFC-4180-style CSV; embedded newlines survive through quoting."""
    fh, owned = _open_out(out)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for record in records:
            row = record_row(record)
            writer.writerow([row[name] for name in CSV_HEADER])
    except OSError as exc:
        raise WriteFailed(str(out), exc) from exc
    finally:
        if owned:
            fh.close()


def write_jsonl(records: Sequence[DatasetRecord], out: str | Path | TextIO) -> None:
    """One JSON object per line, same fields as the CSV; javadoc as null."""
    fh, owned = _open_out(out)
    try:
        for record in records:
            row: dict[str, object] = record_row(record)
            row["line"] = record.line
            row["index"] = record.index
            row["javadoc"] = record.javadoc
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    except OSError as exc:
        raise WriteFailed(str(out), exc) from exc
    finally:
        if owned:
            fh.close()


def write_failures_csv(failures: Sequence[ReconstructionFailure], out: str | Path | TextIO) -> None:
    fh, owned = _open_out(out)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FAILURES_HEADER)
        for failure in failures:
            writer.writerow([failure.mutant_id, failure.mutator, failure.code.value, failure.detail])
    except OSError as exc:
        raise WriteFailed(str(out), exc) from exc
    finally:
        if owned:
            fh.close()


def read_dataset_rows(path: str | Path) -> list[dict[str, str]]:
    """Rows of a previously written dataset, CSV or JSONL by extension."""
    path = Path(path)
    if path.suffix == ".jsonl":
        rows = []
        with path.open("r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    obj = json.loads(line)
                    rows.append({k: ("" if v is None else str(v)) for k, v in obj.items()})
        return rows
    with path.open("r", encoding="utf-8", newline="") as fh:
        return [dict(row) for row in csv.DictReader(fh)]


def read_failure_rows(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        return [dict(row) for row in csv.DictReader(fh)]


# --- statistics ---------------------------------------------------------------


def _percent(part: int, whole: int) -> str:
    if whole == 0:
        return "—"
    value = Decimal(part) * 100 / Decimal(whole)
    return str(value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class SystemRow:
    system: str
    files: int
    mutations: int
    preserved: int
    preserved_pct: str
    javadoc: int
    javadoc_pct: str


@dataclass(frozen=True)
class OperatorRow:
    operator: str
    mutations: int
    preserved: int
    rate_pct: str


@dataclass(frozen=True)
class StatsTables:
    system_rows: list[SystemRow]
    operator_rows: list[OperatorRow]
    total: OperatorRow  # operator field holds "Total"

    def render(self) -> str:
        out = io.StringIO()
        sys_header = ["System", "Files", "Mutations", "Preserved", "Preserved%", "Javadoc", "Javadoc%"]
        sys_cells = [
            [r.system, str(r.files), str(r.mutations), str(r.preserved), r.preserved_pct, str(r.javadoc), r.javadoc_pct]
            for r in self.system_rows
        ]
        _render_table(out, sys_header, sys_cells)
        out.write("\n")
        op_header = ["Operator", "Mutations", "Preserved", "Rate%"]
        op_cells = [
            [r.operator, str(r.mutations), str(r.preserved), r.rate_pct]
            for r in self.operator_rows
        ]
        op_cells.append([self.total.operator, str(self.total.mutations), str(self.total.preserved), self.total.rate_pct])
        _render_table(out, op_header, op_cells)
        return out.getvalue()


def _render_table(out: io.StringIO, header: list[str], rows: list[list[str]]) -> None:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def fmt(row: list[str]) -> str:
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(widths[i]) for i, cell in enumerate(row) if i > 0]
        return "  ".join(cells).rstrip()

    out.write(fmt(header) + "\n")
    for row in rows:
        out.write(fmt(row) + "\n")


def stats(
    records: Sequence[DatasetRecord],
    failures: Sequence[ReconstructionFailure],
    system: str = "system",
) -> StatsTables:
    """Per-system and per-operator reconstruction tables."""
    rows = [
        ("system", record.source_path, operator_short_name(record.mutator), True, bool(record.javadoc))
        for record in records
    ]
    fail_rows = [(operator_short_name(f.mutator),) for f in failures]
    return _stats_core(rows, fail_rows, system)


def stats_from_rows(
    dataset_rows: Iterable[dict[str, str]],
    failure_rows: Iterable[dict[str, str]],
    system: str = "system",
) -> StatsTables:
    """Same tables, computed from previously serialized rows."""
    rows = [
        ("system", row.get("source_path", ""), operator_short_name(row.get("mutator", "")), True, bool(row.get("javadoc")))
        for row in dataset_rows
    ]
    fail_rows = [(operator_short_name(row.get("mutator", "")),) for row in failure_rows]
    return _stats_core(rows, fail_rows, system)


def _stats_core(
    rows: list[tuple[str, str, str, bool, bool]],
    fail_rows: list[tuple[str]],
    system: str,
) -> StatsTables:
    files = {source for _, source, _, _, _ in rows if source}
    preserved = len(rows)
    mutations = preserved + len(fail_rows)
    javadoc = sum(1 for _, _, _, _, has_doc in rows if has_doc)

    per_operator: dict[str, list[int]] = {}
    for _, _, operator, _, _ in rows:
        counts = per_operator.setdefault(operator, [0, 0])
        counts[0] += 1
        counts[1] += 1
    for (operator,) in fail_rows:
        counts = per_operator.setdefault(operator, [0, 0])
        counts[0] += 1

    system_rows = [
        SystemRow(
            system=system,
            files=len(files),
            mutations=mutations,
            preserved=preserved,
            preserved_pct=_percent(preserved, mutations),
            javadoc=javadoc,
            javadoc_pct=_percent(javadoc, preserved),
        )
    ]
    operator_rows = [
        OperatorRow(
            operator=operator,
            mutations=counts[0],
            preserved=counts[1],
            rate_pct=_percent(counts[1], counts[0]),
        )
        for operator, counts in sorted(per_operator.items())
    ]
    total = OperatorRow(
        operator="Total",
        mutations=mutations,
        preserved=preserved,
        rate_pct=_percent(preserved, mutations),
    )
    return StatsTables(system_rows=system_rows, operator_rows=operator_rows, total=total)
