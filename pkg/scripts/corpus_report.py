#!/usr/bin/env python3
"""Analyze every `.ddesc` file in a directory and print a corpus report.

For each description: diagnostics, the documentation-completeness score,
and a round-trip check (pretty-print, reparse, compare models). With
`--registry` the corpus is indexed and a few example queries are run.

    python scripts/corpus_report.py tests/fixtures --registry
"""

from __future__ import annotations

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from datadesc import (Registry, analyze_source, completeness_report,
                      parse_query, pretty_print)

EXAMPLE_QUERIES = (
    "task=Image-classification",
    "issue_type=Bias",
    "min_size>=2000",
    "",
)


def report_file(path: pathlib.Path) -> bool:
    result = analyze_source(path.read_text(encoding="utf-8"))
    print(f"== {path.name}: {len(result.diagnostics)} diagnostic(s)")
    for diag in result.diagnostics:
        print("  ", diag.format_line(path.name))
    if result.model is None:
        print("   model did not build")
        return False

    report = completeness_report(result.model)
    cells = "  ".join(f"{s.section} {s.filled}/{s.expected}"
                      for s in report.sections)
    print(f"   completeness {report.overall_pct}%  ({cells})")
    for item in report.missing_items:
        print(f"   missing: {item}")

    reparsed = analyze_source(pretty_print(result.model))
    if reparsed.model == result.model:
        print("   round-trip ok")
        return True
    print("   ROUND-TRIP MISMATCH")
    return False


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("directory", nargs="?", default="tests/fixtures")
    ap.add_argument("--registry", action="store_true",
                    help="index the corpus and run the example queries")
    args = ap.parse_args()

    root = pathlib.Path(args.directory)
    files = sorted(root.glob("*.ddesc"))
    if not files:
        print(f"no .ddesc files under {root}", file=sys.stderr)
        return 2

    ok = all([report_file(path) for path in files])

    if args.registry:
        registry = Registry(root)
        registry.scan()
        print(f"== registry: {len(registry.entries)} dataset(s)")
        for text in EXAMPLE_QUERIES:
            matches = registry.search(parse_query(text)).matches
            shown = ", ".join(m.dataset_id for m in matches) or "(none)"
            print(f"   {text or '<all>'} -> {shown}")

    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
