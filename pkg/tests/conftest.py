"""Shared fixtures: corpus paths and parsed pipeline results."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS / "tools"))

FIXTURES = TESTS / "fixtures"
TOY = FIXTURES / "toy"
ORACLE_DIR = FIXTURES / "oracle"
EXTRA_CLASSES = FIXTURES / "extra_classes"
GOLDEN = FIXTURES / "golden"


@pytest.fixture(scope="session")
def toy_layout():
    from mutrecon import discover

    return discover(TOY)


@pytest.fixture(scope="session")
def toy_report(toy_layout):
    from mutrecon import parse_report

    return parse_report(toy_layout.report_path.read_bytes())


@pytest.fixture(scope="session")
def toy_dataset(toy_layout):
    """(records, failures) for the whole fixture corpus, computed once."""
    from mutrecon import generate_dataset

    return generate_dataset(toy_layout)


def load_oracle(class_name: str) -> dict[str, dict]:
    """Parse a committed .disasm oracle listing.

    Returns {"name descriptor": {"instructions": [(offset, mnemonic, line|None)],
    "line_table": [(offset, line)], "abstract": bool}}.
    """
    text = (ORACLE_DIR / f"{class_name}.disasm").read_text(encoding="utf-8")
    methods: dict[str, dict] = {}
    current: dict | None = None
    in_linetable = False
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("class "):
            continue
        if line.startswith("method "):
            _, name, descriptor = line.split(" ", 2)
            current = {"instructions": [], "line_table": [], "abstract": False}
            methods[f"{name} {descriptor}"] = current
            in_linetable = False
        elif line == "abstract":
            assert current is not None
            current["abstract"] = True
        elif line == "linetable":
            in_linetable = True
        elif line == "end":
            current = None
            in_linetable = False
        elif line and current is not None:
            parts = line.split()
            if in_linetable:
                current["line_table"].append((int(parts[0]), int(parts[1])))
            else:
                offset, mnemonic, line_no = parts
                current["instructions"].append(
                    (int(offset), mnemonic, None if line_no == "-" else int(line_no))
                )
    return methods


def all_fixture_classes() -> list[tuple[str, Path]]:
    """(dotted class name, class file path) for every committed class file."""
    out = []
    for directory in (TOY / "target/classes", EXTRA_CLASSES):
        for path in sorted(directory.rglob("*.class")):
            stem = path.stem
            out.append((f"com.example.{stem}", path))
    return out
