"""Command-line interface.

Subcommands: check, report, diff, import, docgen, search, fmt, lsp.
Exit codes: 0 success (warnings allowed), 1 error diagnostics or rule
violations, 2 usage errors. `--json` switches machine-readable output;
`DATADESC_NO_COLOR` disables colors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from .analysis import compare, check_statistics, completeness_report
from .diagnostics import Diagnostic, has_errors, sort_diagnostics
from .docgen import to_html, to_markdown
from .ingest import IngestError, load_table, scaffold_description
from .model.build import Analysis, analyze_source
from .registry import QueryError, Registry, parse_query
from .rules import SchemaMismatch
from .syntax.printer import pretty_print


class UsageError(Exception):
    pass


def _use_color() -> bool:
    if os.environ.get("DATADESC_NO_COLOR"):
        return False
    return sys.stdout.isatty()


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _print_diagnostics(filename: str, diags: list[Diagnostic]) -> None:
    color = _use_color()
    for diag in diags:
        print(diag.format_line(filename, color=color))


def _emit_json(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2))


def _diags_payload(diags: list[Diagnostic]) -> list[dict[str, Any]]:
    return [d.to_json_dict() for d in diags]


def _analyze_file(path: str) -> Analysis:
    return analyze_source(_read_text(path))


# --------------------------------------------------------------------------
# subcommands


def _cmd_check(args: argparse.Namespace) -> int:
    result = _analyze_file(args.file)
    diags = list(result.diagnostics)
    if args.data is not None:
        if result.model is None:
            print(f"{args.file}: skipping --data checks: model did not build",
                  file=sys.stderr)
        else:
            try:
                table = load_table(_read_bytes(args.data),
                                   name=Path(args.data).stem)
                diags.extend(check_statistics(result.model, table))
            except IngestError as exc:
                diags.append(exc.diagnostic)
            except SchemaMismatch as exc:
                print(f"{args.data}: schema mismatch: {exc}", file=sys.stderr)
                return 1
    diags = sort_diagnostics(diags)
    failed = has_errors(diags)
    if args.json:
        _emit_json({"file": args.file, "ok": not failed,
                    "diagnostics": _diags_payload(diags)})
    else:
        _print_diagnostics(args.file, diags)
        if not diags:
            print(f"{args.file}: ok")
    return 1 if failed else 0


def _cmd_report(args: argparse.Namespace) -> int:
    result = _analyze_file(args.file)
    if result.model is None:
        if args.json:
            _emit_json({"file": args.file, "ok": False,
                        "diagnostics": _diags_payload(result.diagnostics)})
        else:
            _print_diagnostics(args.file, result.diagnostics)
        return 1
    report = completeness_report(result.model)
    if args.json:
        _emit_json({"file": args.file, "ok": True,
                    "report": report.to_json_dict()})
        return 0
    width = max(len(s.section) for s in report.sections)
    for section in report.sections:
        line = f"{section.section:<{width}}  {section.filled}/{section.expected}"
        if section.missing_items:
            line += "  missing: " + ", ".join(section.missing_items)
        print(line)
    print(f"overall: {report.overall_pct}%")
    return 0


def _cmd_diff(args: argparse.Namespace) -> int:
    failed = False
    models = []
    for path in (args.old, args.new):
        result = _analyze_file(path)
        if result.model is None:
            _print_diagnostics(path, result.diagnostics)
            failed = True
        models.append(result.model)
    if failed:
        return 1
    report = compare(models[0], models[1])
    if args.json:
        _emit_json({"old": args.old, "new": args.new,
                    "entries": [e.to_json_dict() for e in report.entries]})
        return 0
    if not report.entries:
        print("no differences")
        return 0
    for entry in report.entries:
        if entry.kind == "Added":
            print(f"added   {entry.path}: {json.dumps(entry.after)}")
        elif entry.kind == "Removed":
            print(f"removed {entry.path}: {json.dumps(entry.before)}")
        else:
            print(f"changed {entry.path}: "
                  f"{json.dumps(entry.before)} -> {json.dumps(entry.after)}")
    return 0


def _cmd_import(args: argparse.Namespace) -> int:
    try:
        table = load_table(_read_bytes(args.csv), name=Path(args.csv).stem)
        model = scaffold_description(table, args.title)
    except IngestError as exc:
        if args.json:
            _emit_json({"file": args.csv, "ok": False,
                        "diagnostics": _diags_payload([exc.diagnostic])})
        else:
            _print_diagnostics(args.csv, [exc.diagnostic])
        return 1
    text = pretty_print(model)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    if args.json:
        _emit_json({"file": args.csv, "ok": True,
                    "output": args.output, "text": text})
    elif not args.output:
        print(text, end="")
    return 0


def _cmd_docgen(args: argparse.Namespace) -> int:
    result = _analyze_file(args.file)
    if result.model is None:
        _print_diagnostics(args.file, result.diagnostics)
        return 1
    text = to_html(result.model) if args.format == "html" else to_markdown(result.model)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    if args.json:
        _emit_json({"file": args.file, "ok": True,
                    "format": args.format, "output": args.output,
                    "text": text})
    elif not args.output:
        print(text, end="")
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    query_text = " ".join(args.query)
    try:
        query = parse_query(query_text)
    except QueryError as exc:
        if args.json:
            _emit_json({"ok": False,
                        "diagnostics": _diags_payload([exc.diagnostic])})
        else:
            _print_diagnostics("<query>", [exc.diagnostic])
        return 1
    root = Path(args.dir)
    if not root.is_dir():
        raise UsageError(f"not a directory: {args.dir}")
    registry = Registry.open(root)
    for filename, diags in registry.problems:
        print(f"{filename}: skipped ({len(diags)} diagnostics)", file=sys.stderr)
    result = registry.search(query)
    if args.json:
        _emit_json({"ok": True, "query": query_text,
                    "matches": [m.to_json_dict() for m in result.matches]})
        return 0
    if not result.matches:
        print("no matches")
        return 0
    for match in result.matches:
        print(f"{match.dataset_id}\t{match.title}")
    return 0


def _cmd_fmt(args: argparse.Namespace) -> int:
    result = _analyze_file(args.file)
    if result.model is None:
        _print_diagnostics(args.file, result.diagnostics)
        return 1
    Path(args.file).write_text(pretty_print(result.model), encoding="utf-8")
    if args.json:
        _emit_json({"file": args.file, "ok": True})
    return 0


def _cmd_lsp(args: argparse.Namespace) -> int:
    from .langserver import serve_stdio

    return serve_stdio()


# --------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="datadesc",
        description="Toolchain for dataset description documents (.ddesc).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, func) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true",
                       help="emit machine-readable JSON")
        p.set_defaults(func=func)
        return p

    p = add("check", "parse, build, and validate a description", _cmd_check)
    p.add_argument("file")
    p.add_argument("--data", metavar="CSV",
                   help="also check declared statistics and rules against data")

    p = add("report", "documentation-completeness report", _cmd_report)
    p.add_argument("file")

    p = add("diff", "structural diff of two descriptions", _cmd_diff)
    p.add_argument("old")
    p.add_argument("new")

    p = add("import", "scaffold a description from a CSV file", _cmd_import)
    p.add_argument("csv")
    p.add_argument("--title", required=True)
    p.add_argument("-o", "--output", metavar="FILE")

    p = add("docgen", "generate datasheet documentation", _cmd_docgen)
    p.add_argument("file")
    p.add_argument("--format", choices=("md", "html"), default="md")
    p.add_argument("-o", "--output", metavar="FILE")

    p = add("search", "query a registry directory", _cmd_search)
    p.add_argument("dir")
    p.add_argument("query", nargs="*",
                   help="e.g. tag=Melanoma AND min_size>=10000")

    p = add("fmt", "pretty-print a description in place", _cmd_fmt)
    p.add_argument("file")

    add("lsp", "run the language server on stdio", _cmd_lsp)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"datadesc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
