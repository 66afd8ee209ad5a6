"""Canonical JSON form of a model.

Key order is fixed and absent optional values are omitted, so two equal
models serialize to identical documents. Dates keep the surface
DD-MM-YYYY spelling; enum values serialize as their canonical surface
strings; rule expressions serialize to their canonical text.
"""

from __future__ import annotations

import datetime
from typing import Any

from ..rules import expr_to_text
from . import types as m

_QUALITY_METRIC_ORDER = ("ClassBalance", "NoisyLabels", "Outliers", "Completeness")


def _clean(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    """Keep insertion order, drop None and empty containers."""
    out: dict[str, Any] = {}
    for key, value in pairs:
        if value is None:
            continue
        if isinstance(value, (list, dict)) and not value:
            continue
        out[key] = value
    return out


def _date(value: datetime.date | None) -> str | None:
    if value is None:
        return None
    return f"{value.day:02d}-{value.month:02d}-{value.year:04d}"


def _contributor(person: m.Contributor) -> dict[str, Any]:
    return _clean([("name", person.name), ("email", person.email)])


def _funder(funder: m.Funder) -> dict[str, Any]:
    return _clean([
        ("name", funder.name),
        ("funder_type", funder.funder_type.value if funder.funder_type else None),
        ("grantor", funder.grantor),
        ("grant_id", funder.grant_id),
    ])


def _metadata(md: m.Metadata) -> dict[str, Any]:
    return _clean([
        ("unique_id", md.unique_id),
        ("title", md.title),
        ("version", md.version),
        ("release_date", _date(md.release_date)),
        ("description", _clean([
            ("purposes", md.description.purposes),
            ("tasks", list(md.description.tasks)),
            ("gaps", md.description.gaps),
        ])),
        ("tags", list(md.tags)),
        ("categories", list(md.categories)),
        ("licenses", list(md.licenses)),
        ("distribution_policies", list(md.distribution_policies)),
        ("applications", _clean([
            ("recommended", list(md.applications.recommended)),
            ("non_recommended", list(md.applications.non_recommended)),
            ("past_uses", list(md.applications.past_uses)),
        ])),
        ("authoring", _clean([
            ("contribution_guidelines", md.authoring.contribution_guidelines),
            ("authors", [_contributor(p) for p in md.authoring.authors]),
            ("funders", [_funder(f) for f in md.authoring.funders]),
            ("maintainers", [_contributor(p) for p in md.authoring.maintainers]),
            ("maintenance_policies", md.authoring.maintenance_policies),
        ])),
    ])


def _attr_statistics(stats: m.AttributeStatistics) -> dict[str, Any]:
    return _clean([
        ("mode", stats.mode),
        ("mean", stats.mean),
        ("median", stats.median),
        ("std_dev", stats.std_dev),
        ("categorical_distribution",
         dict(stats.categorical_distribution)
         if stats.categorical_distribution is not None else None),
        ("completeness_pct", stats.completeness_pct),
        ("sparsity_count", stats.sparsity_count),
    ])


def _attribute(attr: m.Attribute) -> dict[str, Any]:
    return _clean([
        ("name", attr.name),
        ("description", attr.description),
        ("attr_type", attr.attr_type.value if attr.attr_type else None),
        ("labeling_process_ref", attr.labeling_process_ref),
        ("statistics",
         _attr_statistics(attr.statistics) if attr.statistics else None),
    ])


def _pair_correlation(corr: m.PairCorrelation) -> dict[str, Any]:
    external = None
    if corr.external is not None:
        external = _clean([("source", corr.external.source),
                           ("rationale", corr.external.rationale)])
    return _clean([
        ("left", corr.left),
        ("right", corr.right),
        ("external", external),
        ("value", corr.value),
    ])


def _instance(inst: m.DataInstance) -> dict[str, Any]:
    statistics = None
    if inst.statistics is not None:
        metrics = {name: inst.statistics.quality_metrics[name]
                   for name in _QUALITY_METRIC_ORDER
                   if name in inst.statistics.quality_metrics}
        statistics = _clean([
            ("pair_correlations",
             [_pair_correlation(c) for c in inst.statistics.pair_correlations]),
            ("quality_metrics", metrics),
        ])
    return _clean([
        ("name", inst.name),
        ("description", inst.description),
        ("instance_type",
         inst.instance_type.value if inst.instance_type else None),
        ("size", inst.size),
        ("attributes", [_attribute(a) for a in inst.attributes]),
        ("statistics", statistics),
        ("consistency_rules", [
            _clean([("name", rule.name), ("context", rule.context),
                    ("expr", expr_to_text(rule.expr))])
            for rule in inst.consistency_rules
        ]),
    ])


def _demographics(demo: m.Demographics | None) -> dict[str, Any] | None:
    if demo is None:
        return None
    return _clean([("countries", list(demo.countries)),
                   ("other", dict(demo.other))])


def _gathering(proc: m.GatheringProcess) -> dict[str, Any]:
    return _clean([
        ("name", proc.name),
        ("description", proc.description),
        ("process_type", proc.process_type),
        ("sources", [
            _clean([("name", s.name), ("description", s.description),
                    ("noise", s.noise)])
            for s in proc.sources
        ]),
        ("social_issue_refs", list(proc.social_issue_refs)),
        ("demographics", _demographics(proc.demographics)),
        ("requirements", list(proc.requirements)),
    ])


def _labeling(proc: m.LabelingProcess) -> dict[str, Any]:
    team = None
    if proc.team is not None:
        team = _clean([
            ("description", proc.team.description),
            ("team_type",
             proc.team.team_type.value if proc.team.team_type else None),
            ("demographics", _demographics(proc.team.demographics)),
        ])
    return _clean([
        ("name", proc.name),
        ("description", proc.description),
        ("process_type", proc.process_type),
        ("labels", list(proc.labels)),
        ("team", team),
        ("social_issue_refs", list(proc.social_issue_refs)),
        ("demographics", _demographics(proc.demographics)),
        ("requirements", list(proc.requirements)),
    ])


def model_to_json_dict(model: m.DatasetDescription) -> dict[str, Any]:
    composition = None
    if model.composition is not None:
        composition = _clean([
            ("rationale", model.composition.rationale),
            ("instances", [_instance(i) for i in model.composition.instances]),
        ])
    provenance = None
    if model.provenance is not None:
        provenance = _clean([
            ("curation_rationale", model.provenance.curation_rationale),
            ("gathering", [_gathering(p) for p in model.provenance.gathering]),
            ("labeling", [_labeling(p) for p in model.provenance.labeling]),
        ])
    social = None
    if model.social_concerns is not None:
        social = _clean([
            ("rationale", model.social_concerns.rationale),
            ("issues", [
                _clean([
                    ("name", issue.name),
                    ("issue_type",
                     issue.issue_type.label if issue.issue_type else None),
                    ("related_attribute_refs",
                     list(issue.related_attribute_refs)),
                    ("description", issue.description),
                ])
                for issue in model.social_concerns.issues
            ]),
        ])
    return _clean([
        ("metadata", _metadata(model.metadata)),
        ("composition", composition),
        ("provenance", provenance),
        ("social_concerns", social),
    ])
