"""Toolchain for textual dataset descriptions.

Parse `.ddesc` documents, build and validate the semantic model,
evaluate consistency rules against tabular data, profile CSV files,
report completeness, diff descriptions, search a registry, and render
documentation.
"""

from .analysis import (CompletenessReport, DiffReport, check_statistics,
                       compare, completeness_report)
from .diagnostics import Diagnostic, Severity, SourceSpan
from .docgen import to_html, to_markdown
from .ingest import (IngestError, compute_pair_correlation, load_table,
                     profile_attribute, scaffold_description)
from .model import (Analysis, analyze_source, build_model, resolve, validate)
from .registry import Query, QueryError, Registry, SearchResult, parse_query
from .rules import RuleVerdict, SchemaMismatch, evaluate_rule, typecheck_rule
from .syntax import parse, parse_lenient, pretty_print
from .tables import Column, Table

__version__ = "0.1.0"

__all__ = [
    "Diagnostic",
    "Severity",
    "SourceSpan",
    "parse",
    "parse_lenient",
    "pretty_print",
    "build_model",
    "validate",
    "resolve",
    "analyze_source",
    "Analysis",
    "Table",
    "Column",
    "load_table",
    "profile_attribute",
    "compute_pair_correlation",
    "scaffold_description",
    "IngestError",
    "completeness_report",
    "CompletenessReport",
    "compare",
    "DiffReport",
    "check_statistics",
    "evaluate_rule",
    "typecheck_rule",
    "RuleVerdict",
    "SchemaMismatch",
    "Registry",
    "Query",
    "QueryError",
    "parse_query",
    "SearchResult",
    "to_markdown",
    "to_html",
    "__version__",
]
