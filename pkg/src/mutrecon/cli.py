"""Command-line interface: gen-dataset, inject, and stats.

Exit codes: 0 success (per-mutation failures included), 2 fatal input or
I/O problem, 3 injection completed but some mutants failed the lexical
validity check, 64 usage error. Diagnostics go to stderr; data goes to
files, or to stdout with `--out -`.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dataset_io, inject, layout, reconstruct, report
from .catalog import DEFAULT_CATALOG, OperatorCatalog, RulesFileError

USAGE_ERROR = 64
FATAL = 2
VALIDITY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("system_path", help="root of the target system")
    parser.add_argument("--report", help="mutation report path (default: newest under target/pit-reports)")
    parser.add_argument("--sources", help="Java sources root (default: src/main/java)")
    parser.add_argument("--classes", help="compiled classes root (default: target/classes)")
    parser.add_argument("--rules", help="extra operator rules file")
    parser.add_argument("--quiet", action="store_true", help="suppress the summary")
    parser.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel source-file workers")


def build_parser() -> _Parser:
    parser = _Parser(prog="mutrecon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-dataset", help="reconstruct a method-level mutant dataset")
    _add_common(gen)
    gen.add_argument("--out", default="dataset.csv", help="dataset output path, or - for stdout")
    gen.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    gen.add_argument("--failures-out", help="failures CSV path (default: failures.csv next to --out)")

    inj = sub.add_parser("inject", help="write mutant source files")
    _add_common(inj)
    inj.add_argument("--mode", choices=("mutation", "statement", "class", "system"), default="system")
    inj.add_argument("--mutant-id", help="selector for --mode mutation")
    inj.add_argument("--class", dest="class_name", help="selector for --mode statement/class")
    inj.add_argument("--line", type=int, help="selector for --mode statement")
    inj.add_argument("--out", default="mutants", help="output root for mutant files")

    st = sub.add_parser("stats", help="render tables from a saved dataset")
    st.add_argument("dataset", help="dataset.csv or dataset.jsonl")
    st.add_argument("failures", help="failures.csv")
    st.add_argument("--system-name", default="system", help="label for the per-system row")

    return parser


def _load_catalog(args: argparse.Namespace) -> OperatorCatalog:
    if getattr(args, "rules", None):
        return OperatorCatalog.with_rules_file(args.rules)
    return DEFAULT_CATALOG


def _discover(args: argparse.Namespace) -> layout.SystemLayout:
    return layout.discover(
        args.system_path, report=args.report, sources=args.sources, classes=args.classes
    )


def _say(args: argparse.Namespace, message: str) -> None:
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def cmd_gen_dataset(args: argparse.Namespace) -> int:
    try:
        system = _discover(args)
        catalog = _load_catalog(args)
        records, failures = reconstruct.generate_dataset(system, catalog, jobs=max(1, args.jobs))
    except (layout.SystemLayoutError, report.MalformedReport, report.MissingField, RulesFileError, OSError) as exc:
        print(f"mutrecon: {exc}", file=sys.stderr)
        return FATAL

    try:
        if args.out == "-":
            writer = dataset_io.write_jsonl if args.format == "jsonl" else dataset_io.write_csv
            writer(records, sys.stdout)
            failures_out = Path(args.failures_out or "failures.csv")
        else:
            out = Path(args.out)
            writer = dataset_io.write_jsonl if args.format == "jsonl" else dataset_io.write_csv
            writer(records, out)
            failures_out = Path(args.failures_out or out.parent / "failures.csv")
        dataset_io.write_failures_csv(failures, failures_out)
    except dataset_io.WriteFailed as exc:
        print(f"mutrecon: {exc}", file=sys.stderr)
        return FATAL

    tables = dataset_io.stats(records, failures, system=Path(args.system_path).name or "system")
    _say(args, tables.render().rstrip("\n"))
    _say(args, f"{len(records)} records, {len(failures)} failures")
    return 0


def cmd_inject(args: argparse.Namespace) -> int:
    target = inject.InjectionTarget(
        mode=args.mode,
        mutant_id=args.mutant_id,
        class_name=args.class_name,
        line=args.line,
    )
    try:
        target.validate()
    except inject.InvalidTarget as exc:
        # Usage-level problem: selectors do not fit the mode.
        print(f"mutrecon inject: error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    try:
        system = _discover(args)
        catalog = _load_catalog(args)
        summary = inject.inject_all(system, target, args.out, catalog, jobs=max(1, args.jobs))
    except (layout.SystemLayoutError, report.MalformedReport, report.MissingField, RulesFileError, inject.WriteFailed, OSError) as exc:
        print(f"mutrecon: {exc}", file=sys.stderr)
        return FATAL

    _say(
        args,
        "written={written} validity_failures={validity} "
        "reconstruction_failures={recon} filtered_out={filtered}".format(
            written=summary.written,
            validity=summary.validity_failures,
            recon=summary.reconstruction_failures,
            filtered=summary.filtered_out,
        ),
    )
    return VALIDITY if summary.validity_failures else 0


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        dataset_rows = dataset_io.read_dataset_rows(args.dataset)
        failure_rows = dataset_io.read_failure_rows(args.failures)
    except OSError as exc:
        print(f"mutrecon: {exc}", file=sys.stderr)
        return FATAL
    tables = dataset_io.stats_from_rows(dataset_rows, failure_rows, system=args.system_name)
    sys.stdout.write(tables.render())
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "gen-dataset":
        return cmd_gen_dataset(args)
    if args.command == "inject":
        return cmd_inject(args)
    return cmd_stats(args)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
