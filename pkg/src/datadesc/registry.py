"""A directory-backed registry of dataset descriptions with conjunctive
requirement queries.

Layout: one `<dataset_id>.ddesc` file per dataset plus an `index.json`
cache of the queryable fields. The files are the source of truth — the
registry rescans them on open, and the index can always be rebuilt.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .diagnostics import Diagnostic, SourceSpan
from .model.build import analyze_source
from .model.types import DatasetDescription
from .syntax.printer import pretty_print

QUERY_FIELDS = (
    "tag", "task", "category", "license", "instance_type",
    "attribute_type", "issue_type", "country", "team_type", "min_size",
)

MAX_CLAUSES = 32

_CLAUSE_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*(>=|!=|=)\s*(.*)")

_OPS = {"=": "eq", "!=": "neq", ">=": "gte"}


class QueryError(Exception):
    """Raised for malformed textual queries; carries the diagnostic."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def _query_error(code: str, message: str, col: int) -> QueryError:
    span = SourceSpan(1, col, 1, col)
    return QueryError(Diagnostic(code=code, message=message, span=span))


@dataclass(frozen=True)
class Clause:
    field: str
    op: str                 # eq | neq | gte
    value: str | int


@dataclass
class Query:
    clauses: list[Clause] = field(default_factory=list)


def parse_query(text: str) -> Query:
    """Parse `field=value`, `field!=value`, `min_size>=N` clauses joined
    by AND. An empty query matches everything."""
    if not text.strip():
        return Query()
    clauses: list[Clause] = []
    cursor = 0
    for part in re.split(r"\s+AND\s+", text.strip()):
        col = text.index(part, cursor) + 1
        cursor = col - 1 + len(part)
        if len(clauses) == MAX_CLAUSES:
            raise _query_error("E051", f"too many clauses (max {MAX_CLAUSES})", col)
        m = _CLAUSE_RE.fullmatch(part)
        if m is None:
            raise _query_error("E051", f"malformed clause {part!r}", col)
        fname, op_text, value = m.group(1), m.group(2), m.group(3).strip()
        if fname not in QUERY_FIELDS:
            raise _query_error("E050", f"unknown query field {fname!r}", col)
        if not value:
            raise _query_error("E051", f"clause {part!r} has an empty value", col)
        op = _OPS[op_text]
        if fname == "min_size":
            if op != "gte":
                raise _query_error("E051", "min_size requires '>='", col)
            try:
                clauses.append(Clause(fname, op, int(value)))
            except ValueError:
                raise _query_error(
                    "E051", f"min_size needs an integer, got {value!r}", col
                ) from None
            continue
        if op == "gte":
            raise _query_error("E051", "'>=' only applies to min_size", col)
        clauses.append(Clause(fname, op, value))
    return Query(clauses)


# --------------------------------------------------------------------------


@dataclass
class IndexEntry:
    dataset_id: str
    title: str
    values: dict[str, list[str]]    # per multi-valued query field
    total_size: int

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"dataset_id": self.dataset_id, "title": self.title}
        out.update({f: list(v) for f, v in self.values.items()})
        out["total_size"] = self.total_size
        return out


def _countries(model: DatasetDescription) -> list[str]:
    demos = []
    if model.provenance is not None:
        for proc in model.provenance.gathering:
            demos.append(proc.demographics)
        for proc in model.provenance.labeling:
            demos.append(proc.demographics)
            if proc.team is not None:
                demos.append(proc.team.demographics)
    out: list[str] = []
    for demo in demos:
        if demo is not None:
            out.extend(demo.countries)
    return out


def index_entry(model: DatasetDescription) -> IndexEntry:
    md = model.metadata
    instances = model.composition.instances if model.composition else []
    attrs = [a for inst in instances for a in inst.attributes]
    issues = model.social_concerns.issues if model.social_concerns else []
    labeling = model.provenance.labeling if model.provenance else []
    values = {
        "tag": list(md.tags),
        "task": list(md.description.tasks),
        "category": list(md.categories),
        "license": list(md.licenses),
        "instance_type": [i.instance_type.value for i in instances
                          if i.instance_type is not None],
        "attribute_type": [a.attr_type.value for a in attrs
                           if a.attr_type is not None],
        "issue_type": [i.issue_type.label for i in issues
                       if i.issue_type is not None],
        "country": _countries(model),
        "team_type": [p.team.team_type.value for p in labeling
                      if p.team is not None and p.team.team_type is not None],
    }
    return IndexEntry(
        dataset_id=md.unique_id,
        title=md.title,
        values=values,
        total_size=sum(i.size or 0 for i in instances),
    )


def _matches(entry: IndexEntry, clause: Clause) -> bool:
    if clause.field == "min_size":
        return entry.total_size >= int(clause.value)
    wanted = str(clause.value).lower()
    have = [v.lower() for v in entry.values.get(clause.field, [])]
    if clause.op == "eq":
        return wanted in have
    return wanted not in have


@dataclass
class Match:
    dataset_id: str
    title: str
    matched_clauses: int

    def to_json_dict(self) -> dict[str, Any]:
        return {"dataset_id": self.dataset_id, "title": self.title,
                "matched_clauses": self.matched_clauses}


@dataclass
class SearchResult:
    matches: list[Match] = field(default_factory=list)

    def to_json_dict(self) -> dict[str, Any]:
        return {"matches": [m.to_json_dict() for m in self.matches]}


class Registry:
    """Registry over a directory of `.ddesc` files."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.entries: dict[str, IndexEntry] = {}
        self.problems: list[tuple[str, list[Diagnostic]]] = []

    @classmethod
    def open(cls, root: str | Path) -> "Registry":
        reg = cls(root)
        reg.scan()
        return reg

    def scan(self) -> None:
        """Rebuild the in-memory index from the `.ddesc` files."""
        self.entries.clear()
        self.problems.clear()
        for path in sorted(self.root.glob("*.ddesc")):
            result = analyze_source(path.read_text(encoding="utf-8"))
            if result.model is None:
                self.problems.append((path.name, list(result.diagnostics)))
                continue
            entry = index_entry(result.model)
            self.entries[entry.dataset_id] = entry

    def index_add(self, model: DatasetDescription) -> str:
        """Store a model in the registry; re-adding an id replaces it."""
        entry = index_entry(model)
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / f"{entry.dataset_id}.ddesc"
        path.write_text(pretty_print(model), encoding="utf-8")
        self.entries[entry.dataset_id] = entry
        self.write_index()
        return entry.dataset_id

    def write_index(self) -> None:
        payload = {
            "version": 1,
            "datasets": [self.entries[k].to_json_dict()
                         for k in sorted(self.entries)],
        }
        (self.root / "index.json").write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )

    def search(self, query: Query) -> SearchResult:
        matches = []
        for entry in self.entries.values():
            if all(_matches(entry, clause) for clause in query.clauses):
                matches.append(Match(
                    dataset_id=entry.dataset_id,
                    title=entry.title,
                    matched_clauses=len(query.clauses),
                ))
        matches.sort(key=lambda m: (m.title, m.dataset_id))
        return SearchResult(matches=matches)
