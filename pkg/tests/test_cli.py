"""CLI behavior: exit codes, outputs, determinism."""

from __future__ import annotations

import json
from pathlib import Path

from mutrecon.cli import main

from conftest import TOY


def _gen(tmp_path: Path, *extra: str) -> int:
    out = tmp_path / "dataset.csv"
    return main(["gen-dataset", str(TOY), "--out", str(out), "--quiet", *extra])


def test_gen_dataset_happy_path(tmp_path, capsys):
    out = tmp_path / "dataset.csv"
    code = main(["gen-dataset", str(TOY), "--out", str(out)])
    assert code == 0
    assert out.is_file()
    assert (tmp_path / "failures.csv").is_file()
    err = capsys.readouterr().err
    assert "43 records, 7 failures" in err
    assert "Operator" in err  # stats table printed as a diagnostic


def test_gen_dataset_quiet(tmp_path, capsys):
    assert _gen(tmp_path) == 0
    assert capsys.readouterr().err == ""


def test_gen_dataset_missing_report(tmp_path, capsys):
    (tmp_path / "src/main/java").mkdir(parents=True)
    code = main(["gen-dataset", str(tmp_path), "--quiet"])
    assert code == 2
    assert "pit-reports" in capsys.readouterr().err


def test_gen_dataset_jsonl_format(tmp_path):
    out = tmp_path / "d.jsonl"
    code = main(["gen-dataset", str(TOY), "--out", str(out), "--format", "jsonl", "--quiet"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 43
    assert json.loads(lines[0])["mutant_id"]


def test_gen_dataset_stdout(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code = main(["gen-dataset", str(TOY), "--out", "-", "--quiet"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("mutant_id,")
    assert (tmp_path / "failures.csv").is_file()


def test_gen_dataset_deterministic_across_runs_and_jobs(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    first.mkdir(), second.mkdir()
    assert main(["gen-dataset", str(TOY), "--out", str(first / "d.csv"),
                 "--failures-out", str(first / "f.csv"), "--quiet"]) == 0
    assert main(["gen-dataset", str(TOY), "--out", str(second / "d.csv"),
                 "--failures-out", str(second / "f.csv"), "--quiet", "--jobs", "8"]) == 0
    assert (first / "d.csv").read_bytes() == (second / "d.csv").read_bytes()
    assert (first / "f.csv").read_bytes() == (second / "f.csv").read_bytes()


def test_usage_error_exit_code():
    assert main(["gen-dataset"]) == 64  # missing positional
    assert main(["no-such-command"]) == 64
    assert main(["gen-dataset", str(TOY), "--format", "yaml"]) == 64


def test_inject_system(tmp_path, capsys):
    out = tmp_path / "mutants"
    code = main(["inject", str(TOY), "--out", str(out)])
    assert code == 0
    err = capsys.readouterr().err
    assert "written=43" in err
    assert (out / "manifest.jsonl").is_file()


def test_inject_single_mutation(tmp_path):
    out = tmp_path / "mutants"
    code = main([
        "inject", str(TOY), "--out", str(out),
        "--mode", "mutation", "--mutant-id", "com.example.Counter:8:Increments:0",
        "--quiet",
    ])
    assert code == 0
    files = list(out.rglob("*.java"))
    assert len(files) == 1


def test_inject_statement_mode(tmp_path):
    out = tmp_path / "mutants"
    code = main([
        "inject", str(TOY), "--out", str(out),
        "--mode", "statement", "--class", "com.example.Calculator", "--line", "12",
        "--quiet",
    ])
    assert code == 0
    assert len(list(out.rglob("*.java"))) == 2  # both disambiguated additions


def test_inject_selector_mismatch_is_usage_error(tmp_path, capsys):
    code = main([
        "inject", str(TOY), "--out", str(tmp_path / "m"),
        "--mode", "statement", "--class", "com.example.Foo",
    ])
    assert code == 64
    assert "requires" in capsys.readouterr().err


def test_inject_class_mode(tmp_path):
    out = tmp_path / "mutants"
    code = main([
        "inject", str(TOY), "--out", str(out),
        "--mode", "class", "--class", "com.example.Nested", "--quiet",
    ])
    assert code == 0
    assert len(list(out.rglob("*.java"))) == 3


def test_stats_command(tmp_path, capsys):
    out = tmp_path / "d.csv"
    failures = tmp_path / "failures.csv"
    assert main(["gen-dataset", str(TOY), "--out", str(out), "--quiet"]) == 0
    code = main(["stats", str(out), str(failures), "--system-name", "toy"])
    assert code == 0
    printed = capsys.readouterr().out
    assert "Operator" in printed and "Total" in printed
    assert "ExperimentalSwitch" in printed


def test_stats_unreadable_input(tmp_path, capsys):
    code = main(["stats", str(tmp_path / "missing.csv"), str(tmp_path / "missing2.csv")])
    assert code == 2


def test_stats_totals_conserve(tmp_path, capsys):
    out = tmp_path / "d.csv"
    assert main(["gen-dataset", str(TOY), "--out", str(out), "--quiet"]) == 0
    assert main(["stats", str(out), str(tmp_path / "failures.csv")]) == 0
    table = capsys.readouterr().out
    total_line = next(line for line in table.splitlines() if line.startswith("Total"))
    assert total_line.split()[1:] == ["50", "43", "86.00"]


def test_stats_from_jsonl(tmp_path, capsys):
    out = tmp_path / "d.jsonl"
    assert main(["gen-dataset", str(TOY), "--out", str(out), "--format", "jsonl", "--quiet"]) == 0
    assert main(["stats", str(out), str(tmp_path / "failures.csv")]) == 0
    assert "Total" in capsys.readouterr().out


def test_inject_validity_failure_exit_code(tmp_path):
    """A rewrite that breaks tokenization flags the file and exits 3."""
    source = (TOY / "src/main/java/com/example/Calculator.java").read_text()
    line_no = source.split("\n").index("        return a - b;") + 1
    report = tmp_path / "mutations.xml"
    report.write_text(
        "<mutations><mutation detected='false' status='SURVIVED'>"
        "<sourceFile>Calculator.java</sourceFile>"
        "<mutatedClass>com.example.Calculator</mutatedClass>"
        "<mutatedMethod>subtract</mutatedMethod>"
        "<methodDescription>(II)I</methodDescription>"
        f"<lineNumber>{line_no}</lineNumber>"
        "<mutator>org.acme.BreakerMutator</mutator>"
        "<index>2</index><block>0</block>"
        "<description>break the return</description>"
        "</mutation></mutations>",
        encoding="utf-8",
    )
    rules = tmp_path / "breaker.rules"
    rules.write_text(
        'BreakerMutator | break the return | return_statement | "unterminated | ireturn\n',
        encoding="utf-8",
    )
    out = tmp_path / "m"
    code = main([
        "inject", str(TOY), "--report", str(report), "--rules", str(rules),
        "--out", str(out), "--quiet",
    ])
    assert code == 3
    (java_file,) = list(out.rglob("*.java"))  # flagged but still written
    assert 'return "unterminated;' in java_file.read_text()
    manifest = json.loads((out / "manifest.jsonl").read_text().splitlines()[0])
    assert manifest["status"] == "lex-failed"


def test_stats_mismatched_inputs_still_conserve(tmp_path, capsys):
    out = tmp_path / "d.csv"
    assert main(["gen-dataset", str(TOY), "--out", str(out), "--quiet"]) == 0
    empty_failures = tmp_path / "none.csv"
    empty_failures.write_text("mutant_id,mutator,code,detail\n")
    assert main(["stats", str(out), str(empty_failures)]) == 0
    total_line = next(
        line for line in capsys.readouterr().out.splitlines() if line.startswith("Total")
    )
    assert total_line.split()[1:] == ["43", "43", "100.00"]


def test_rules_flag(tmp_path):
    rules = tmp_path / "extra.rules"
    rules.write_text("X | never matches anything | return_statement | 0 | ireturn\n")
    assert _gen(tmp_path, "--rules", str(rules)) == 0
    bad = tmp_path / "bad.rules"
    bad.write_text("broken\n")
    assert _gen(tmp_path, "--rules", str(bad)) == 2
