"""Discovery of a target system's report, sources and classes on disk."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

REPORT_GLOB = "target/pit-reports/**/mutations.xml"
DEFAULT_SOURCES = "src/main/java"
DEFAULT_CLASSES = "target/classes"


class SystemLayoutError(Exception):
    """Fatal: the system directory lacks a required input."""


@dataclass(frozen=True)
class SystemLayout:
    root: Path
    report_path: Path
    sources_root: Path
    classes_root: Path


def discover(
    root: str | Path,
    report: str | Path | None = None,
    sources: str | Path | None = None,
    classes: str | Path | None = None,
) -> SystemLayout:
    """Resolve the three inputs under a system directory.

    The report defaults to the newest target/pit-reports/**/mutations.xml
    (report directories are timestamp-named, so lexicographically last is
    newest, and path order keeps discovery deterministic).
    """
    root = Path(root)
    if not root.is_dir():
        raise SystemLayoutError(f"system path is not a directory: {root}")

    if report is not None:
        report_path = Path(report)
        if not report_path.is_file():
            raise SystemLayoutError(f"report not found: {report_path}")
    else:
        found = sorted(root.glob(REPORT_GLOB))
        if not found:
            raise SystemLayoutError(
                f"no mutation report found; searched {root / REPORT_GLOB}"
            )
        report_path = found[-1]

    sources_root = Path(sources) if sources is not None else root / DEFAULT_SOURCES
    classes_root = Path(classes) if classes is not None else root / DEFAULT_CLASSES
    return SystemLayout(
        root=root,
        report_path=report_path,
        sources_root=sources_root,
        classes_root=classes_root,
    )
