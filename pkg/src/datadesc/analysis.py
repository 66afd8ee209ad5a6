"""Documentation-completeness reporting, structural diff, and
declared-vs-actual statistics checks.

The completeness checklist (v1) scores a description against the
elements the datasheet treats as first class: 9 metadata items, 5
composition items (coverage across all instances/attributes), 6
provenance items, 2 social-concern items — 22 in total. The overall
percentage is 100 × Σfilled / Σexpected, rounded half-up to 2 decimals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .diagnostics import POINT_SPAN, Diagnostic, SourceSpan, sort_diagnostics
from .ingest import profile_attribute, round_pct
from .model.serialize import model_to_json_dict
from .model.types import Attribute, DataInstance, DatasetDescription
from .rules import SchemaMismatch, evaluate_rule
from .tables import Table

CHECKLIST_VERSION = 1

SECTIONS = ("Metadata", "Composition", "Provenance", "SocialConcerns")


# --------------------------------------------------------------------------
# completeness


@dataclass
class SectionScore:
    section: str
    filled: int
    expected: int
    missing_items: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "section": self.section,
            "filled": self.filled,
            "expected": self.expected,
            "missing_items": list(self.missing_items),
        }


@dataclass
class CompletenessReport:
    sections: list[SectionScore]
    overall_pct: float

    @property
    def missing_items(self) -> list[str]:
        return [item for s in self.sections for item in s.missing_items]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "checklist_version": CHECKLIST_VERSION,
            "sections": [s.to_json_dict() for s in self.sections],
            "overall_pct": self.overall_pct,
        }


def _all_attributes(model: DatasetDescription) -> list[Attribute]:
    if model.composition is None:
        return []
    return [a for inst in model.composition.instances for a in inst.attributes]


def _metadata_items(model: DatasetDescription) -> list[tuple[str, bool]]:
    md = model.metadata
    return [
        ("metadata.title", bool(md.title)),
        ("metadata.version", bool(md.version)),
        ("metadata.release_date", md.release_date is not None),
        ("metadata.purposes", bool(md.description.purposes)),
        ("metadata.tasks", bool(md.description.tasks)),
        ("metadata.gaps", bool(md.description.gaps)),
        ("metadata.tags", bool(md.tags)),
        ("metadata.licenses", bool(md.licenses)),
        ("metadata.authors", bool(md.authoring.authors)),
    ]


def _composition_items(model: DatasetDescription) -> list[tuple[str, bool]]:
    comp = model.composition
    instances = comp.instances if comp else []
    attrs = _all_attributes(model)
    return [
        ("composition.rationale", comp is not None and bool(comp.rationale)),
        ("composition.instance_types",
         bool(instances) and all(i.instance_type is not None for i in instances)),
        ("composition.instance_sizes",
         bool(instances) and all(i.size is not None for i in instances)),
        ("composition.attribute_types",
         bool(attrs) and all(a.attr_type is not None for a in attrs)),
        ("composition.attribute_statistics",
         bool(attrs) and all(a.statistics is not None for a in attrs)),
    ]


def _provenance_items(model: DatasetDescription) -> list[tuple[str, bool]]:
    prov = model.provenance
    gathering = prov.gathering if prov else []
    labeling = prov.labeling if prov else []
    return [
        ("provenance.curation_rationale",
         prov is not None and bool(prov.curation_rationale)),
        ("provenance.gathering", bool(gathering)),
        ("provenance.gathering.demographics",
         any(p.demographics is not None for p in gathering)),
        ("provenance.gathering.source_noise",
         any(bool(s.noise) for p in gathering for s in p.sources)),
        ("provenance.labeling.team",
         any(p.team is not None for p in labeling)),
        ("provenance.labeling.requirements",
         any(bool(p.requirements) for p in labeling)),
    ]


def _social_items(model: DatasetDescription) -> list[tuple[str, bool]]:
    sc = model.social_concerns
    issues = sc.issues if sc else []
    return [
        ("social_concerns.declared",
         sc is not None and (bool(sc.rationale) or bool(issues))),
        ("social_concerns.attribute_links",
         bool(issues) and all(bool(i.related_attribute_refs) for i in issues)),
    ]


_SECTION_ITEMS: list[tuple[str, Callable[[DatasetDescription], list[tuple[str, bool]]]]] = [
    ("Metadata", _metadata_items),
    ("Composition", _composition_items),
    ("Provenance", _provenance_items),
    ("SocialConcerns", _social_items),
]


def completeness_report(model: DatasetDescription) -> CompletenessReport:
    sections = []
    for section, collect in _SECTION_ITEMS:
        items = collect(model)
        missing = [name for name, ok in items if not ok]
        sections.append(SectionScore(
            section=section,
            filled=len(items) - len(missing),
            expected=len(items),
            missing_items=missing,
        ))
    total_filled = sum(s.filled for s in sections)
    total_expected = sum(s.expected for s in sections)
    overall = round_pct(100.0 * total_filled / total_expected)
    return CompletenessReport(sections=sections, overall_pct=overall)


# --------------------------------------------------------------------------
# structural diff


ADDED = "Added"
REMOVED = "Removed"
CHANGED = "Changed"


@dataclass
class DiffEntry:
    path: str
    kind: str
    before: Any = None
    after: Any = None

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"path": self.path, "kind": self.kind}
        if self.kind != ADDED:
            out["before"] = self.before
        if self.kind != REMOVED:
            out["after"] = self.after
        return out


@dataclass
class DiffReport:
    entries: list[DiffEntry] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def to_json_dict(self) -> dict[str, Any]:
        return {"entries": [e.to_json_dict() for e in self.entries]}


def _join(path: str, key: str) -> str:
    return key if not path else f"{path}/{key}"

# List keys whose segment is elided from paths when their elements are
# matched by name (instances sit directly under their composition path).
_ELIDED_LIST_KEYS = {("composition", "instances")}


def _is_named_list(value: Any) -> bool:
    if not isinstance(value, list) or not value:
        return False
    if not all(isinstance(el, dict) and "name" in el for el in value):
        return False
    names = [el["name"] for el in value]
    return len(set(names)) == len(names)


def _walk_value(path: str, a: Any, b: Any, entries: list[DiffEntry]) -> None:
    if isinstance(a, dict) and isinstance(b, dict):
        _walk_dict(path, a, b, entries)
        return
    if isinstance(a, list) and isinstance(b, list):
        if _is_named_list(a) and _is_named_list(b):
            _walk_named_list(path, a, b, entries)
            return
        if any(isinstance(el, dict) for el in a + b):
            _walk_positional(path, a, b, entries)
            return
        # unnamed scalar list: compared as a whole, reordering counts
    if a != b:
        entries.append(DiffEntry(path=path, kind=CHANGED, before=a, after=b))


def _walk_dict(path: str, a: dict, b: dict, entries: list[DiffEntry]) -> None:
    for key, value in a.items():
        if key not in b:
            entries.append(DiffEntry(path=_join(path, key), kind=REMOVED, before=value))
            continue
        if (path, key) in _ELIDED_LIST_KEYS:
            child = path
        else:
            child = _join(path, key)
        _walk_value(child, value, b[key], entries)
    for key, value in b.items():
        if key not in a:
            entries.append(DiffEntry(path=_join(path, key), kind=ADDED, after=value))


def _walk_named_list(path: str, a: list, b: list, entries: list[DiffEntry]) -> None:
    b_by_name = {el["name"]: el for el in b}
    a_names = set()
    for el in a:
        name = el["name"]
        a_names.add(name)
        if name in b_by_name:
            _walk_value(_join(path, name), el, b_by_name[name], entries)
        else:
            entries.append(DiffEntry(path=_join(path, name), kind=REMOVED, before=el))
    for el in b:
        if el["name"] not in a_names:
            entries.append(DiffEntry(path=_join(path, el["name"]), kind=ADDED, after=el))


def _walk_positional(path: str, a: list, b: list, entries: list[DiffEntry]) -> None:
    for i in range(min(len(a), len(b))):
        _walk_value(f"{path}/{i}", a[i], b[i], entries)
    for i in range(len(b), len(a)):
        entries.append(DiffEntry(path=f"{path}/{i}", kind=REMOVED, before=a[i]))
    for i in range(len(a), len(b)):
        entries.append(DiffEntry(path=f"{path}/{i}", kind=ADDED, after=b[i]))


def compare(a: DatasetDescription, b: DatasetDescription) -> DiffReport:
    """Structural diff over the canonical serializations of two models.

    Named lists are matched by name (reordering is no change); unnamed
    lists compare as a whole (reordering is a change).
    """
    entries: list[DiffEntry] = []
    _walk_dict("", model_to_json_dict(a), model_to_json_dict(b), entries)
    entries.sort(key=lambda e: (e.path, e.kind))
    return DiffReport(entries=entries)


# --------------------------------------------------------------------------
# declared statistics vs. data

_NUMERIC_TOL = 0.01       # mean / median / std_dev, absolute
_PCT_TOL = 0.5            # completeness / distribution, percentage points


def _fmt(value: Any) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    if isinstance(value, str):
        return repr(value)
    return str(value)


def _pick_instance(model: DatasetDescription, table: Table) -> DataInstance:
    instance = model.instance(table.name)
    if instance is not None:
        return instance
    if model.composition is not None and len(model.composition.instances) == 1:
        return model.composition.instances[0]
    raise SchemaMismatch(f"no data instance matches table {table.name!r}")


def check_statistics(model: DatasetDescription, table: Table) -> list[Diagnostic]:
    """Recompute statistics from the table and flag declared values that
    drift beyond tolerance (W030); evaluate the instance's consistency
    rules against the data (E032)."""
    instance = _pick_instance(model, table)
    missing = [a.name for a in instance.attributes if table.column(a.name) is None]
    if missing:
        raise SchemaMismatch(
            f"table {table.name!r} lacks columns for: {', '.join(missing)}"
        )

    diags: list[Diagnostic] = []

    def drift(span: SourceSpan, attr: Attribute, label: str,
              declared: Any, computed: Any) -> None:
        diags.append(Diagnostic(
            code="W030",
            message=(f"attribute '{instance.name}.{attr.name}': declared "
                     f"{label} {_fmt(declared)} differs from computed "
                     f"{_fmt(computed)}"),
            span=span,
        ))

    for attr in instance.attributes:
        declared = attr.statistics
        if declared is None:
            continue
        computed = profile_attribute(table.column(attr.name))
        span = declared.span or attr.span or POINT_SPAN

        if declared.mode is not None and declared.mode != computed.mode:
            drift(span, attr, "Mode", declared.mode, computed.mode)
        for label, dec, com in (
            ("Mean", declared.mean, computed.mean),
            ("Median", declared.median, computed.median),
            ("Standard-Deviation", declared.std_dev, computed.std_dev),
        ):
            if dec is None:
                continue
            if com is None or abs(dec - com) > _NUMERIC_TOL:
                drift(span, attr, label, dec, com)
        if declared.completeness_pct is not None:
            com = computed.completeness_pct
            if com is None or abs(declared.completeness_pct - com) > _PCT_TOL:
                drift(span, attr, "Completeness", declared.completeness_pct, com)
        if declared.sparsity_count is not None \
                and declared.sparsity_count != computed.sparsity_count:
            drift(span, attr, "Sparsity", declared.sparsity_count,
                  computed.sparsity_count)
        if declared.categorical_distribution:
            computed_dist = computed.categorical_distribution or {}
            for key, dec in declared.categorical_distribution.items():
                com = computed_dist.get(key)
                if com is None or abs(dec - com) > _PCT_TOL:
                    drift(span, attr, f"distribution share of {key!r}", dec, com)

    for rule in instance.consistency_rules:
        verdict = evaluate_rule(rule, table)
        if not verdict.holds:
            first = verdict.violating_rows[0]
            diags.append(Diagnostic(
                code="E032",
                message=(f"consistency rule '{rule.name}' violated by "
                         f"{len(verdict.violating_rows)} of "
                         f"{verdict.rows_checked} rows (first at row {first})"),
                span=rule.span or POINT_SPAN,
            ))

    return sort_diagnostics(diags)
