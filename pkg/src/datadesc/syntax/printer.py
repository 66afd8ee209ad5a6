"""Canonical formatter: render a model back to description text.

Output is deterministic — fixed section and property order, two-space
indentation — and is guaranteed to parse back into a structurally equal
model. Values that the grammar would misread bare (quotes, commas,
comment markers, numeric-looking text) are emitted as string literals;
everything else keeps the listing style of unquoted phrases.
"""

from __future__ import annotations

import datetime
import re
from typing import TYPE_CHECKING

from ..rules import expr_to_text

if TYPE_CHECKING:  # pragma: no cover - typing only
    from ..model.types import DatasetDescription

_NUMERIC_LOOK = re.compile(r"[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?%?")


def _escape(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    return out.replace("\n", "\\n").replace("\t", "\\t")


def _quoted(text: str) -> str:
    return f'"{_escape(text)}"'


def _bare_ok(text: str) -> bool:
    if not text or text != text.strip():
        return False
    if any(ch in text for ch in '",\\\n\t\r') or "//" in text:
        return False
    return _NUMERIC_LOOK.fullmatch(text) is None


def _phrase(text: str) -> str:
    return text if _bare_ok(text) else _quoted(text)


def _number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _percent(value: float) -> str:
    return _number(value) + "%"


def _date(value: datetime.date) -> str:
    return f"{value.day:02d}-{value.month:02d}-{value.year:04d}"


class _Printer:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.depth = 0

    def put(self, text: str) -> None:
        self.lines.append("  " * self.depth + text)

    # -- metadata ----------------------------------------------------------

    def metadata(self, md) -> None:
        self.put("Metadata:")
        self.depth += 1
        self.put(f"UniqueId: {_phrase(md.unique_id)}")
        self.put(f"Title: {_quoted(md.title)}")
        if md.version:
            self.put(f"Version: {md.version}")
        if md.release_date is not None:
            self.put(f"Release Date: {_date(md.release_date)}")
        desc = md.description
        if desc.purposes or desc.tasks or desc.gaps:
            self.put("Description:")
            self.depth += 1
            if desc.purposes is not None:
                self.put(f"Purposes: {_quoted(desc.purposes)}")
            if desc.tasks:
                self.put("Tasks: " + ", ".join(_phrase(t) for t in desc.tasks))
            if desc.gaps is not None:
                self.put(f"Gaps: {_quoted(desc.gaps)}")
            self.depth -= 1
        for label, values in (("Tags", md.tags), ("Categories", md.categories),
                              ("Licenses", md.licenses),
                              ("Distribution Policies", md.distribution_policies)):
            if values:
                self.put(f"{label}: " + ", ".join(_phrase(v) for v in values))
        apps = md.applications
        if apps.recommended or apps.non_recommended or apps.past_uses:
            self.put("Applications:")
            self.depth += 1
            for label, values in (("Recommended", apps.recommended),
                                  ("Non-Recommended", apps.non_recommended),
                                  ("Past Uses", apps.past_uses)):
                if values:
                    self.put(f"{label}: " + ", ".join(_quoted(v) for v in values))
            self.depth -= 1
        self._authoring(md.authoring)
        self.depth -= 1

    def _authoring(self, authoring) -> None:
        has_content = (authoring.contribution_guidelines is not None
                       or authoring.authors or authoring.funders
                       or authoring.maintainers
                       or authoring.maintenance_policies is not None)
        if not has_content:
            return
        self.put("Authoring:")
        self.depth += 1
        if authoring.contribution_guidelines is not None:
            self.put(f"Contribution Guidelines: "
                     f"{_quoted(authoring.contribution_guidelines)}")
        for label, people in (("Authors", authoring.authors),
                              ("Maintainers", authoring.maintainers)):
            if not people:
                continue
            self.put(f"{label}:")
            self.depth += 1
            for person in people:
                entry = f"Name {_quoted(person.name)}"
                if person.email is not None:
                    entry += f" Email: {_quoted(person.email)}"
                self.put(entry)
            self.depth -= 1
        if authoring.funders:
            self.put("Funders:")
            self.depth += 1
            for funder in authoring.funders:
                entry = f"Name {_quoted(funder.name)}"
                if funder.funder_type is not None:
                    entry += f" type {funder.funder_type.value}"
                if funder.grantor is not None:
                    entry += f" Grantor {_quoted(funder.grantor)}"
                if funder.grant_id is not None:
                    entry += f" GrantId: {funder.grant_id}"
                self.put(entry)
            self.depth -= 1
        if authoring.maintenance_policies is not None:
            self.put(f"Maintenance Policies: "
                     f"{_quoted(authoring.maintenance_policies)}")
        self.depth -= 1

    # -- composition ---------------------------------------------------------

    def composition(self, comp) -> None:
        self.put("Composition:")
        self.depth += 1
        if comp.rationale is not None:
            self.put(f"Rationale: {_quoted(comp.rationale)}")
        if comp.instances:
            self.put("DataInstances:")
            self.depth += 1
            for inst in comp.instances:
                self._instance(inst)
            self.depth -= 1
        self.depth -= 1

    def _instance(self, inst) -> None:
        self.put(f"Instance: {inst.name}")
        self.depth += 1
        if inst.description is not None:
            self.put(f"Description: {_quoted(inst.description)}")
        if inst.instance_type is not None:
            self.put(f"Type: {inst.instance_type.value}")
        if inst.size is not None:
            self.put(f"Size: {inst.size}")
        if inst.attributes:
            self.put("Attributes:")
            self.depth += 1
            for attr in inst.attributes:
                self._attribute(attr)
            self.depth -= 1
        stats = inst.statistics
        if stats is not None and (stats.pair_correlations or stats.quality_metrics):
            self.put("Statistics:")
            self.depth += 1
            for corr in stats.pair_correlations:
                self._pair_correlation(corr)
            if stats.quality_metrics:
                self.put("Quality Metrics:")
                self.depth += 1
                for metric in ("ClassBalance", "NoisyLabels", "Outliers",
                               "Completeness"):
                    if metric not in stats.quality_metrics:
                        continue
                    value = stats.quality_metrics[metric]
                    surface = {"ClassBalance": "Class-Balance",
                               "NoisyLabels": "Noisy-Labels",
                               "Outliers": "Outliers",
                               "Completeness": "Completeness"}[metric]
                    rendered = (_percent(value) if metric == "Completeness"
                                else _number(value))
                    self.put(f"{surface}: {rendered}")
                self.depth -= 1
            self.depth -= 1
        if inst.consistency_rules:
            self.put("Consistency Rules:")
            self.depth += 1
            for rule in inst.consistency_rules:
                name = f" {rule.name}" if rule.name else ""
                self.put(f"Inv {rule.context}{name}: {expr_to_text(rule.expr)}")
            self.depth -= 1
        self.depth -= 1

    def _attribute(self, attr) -> None:
        self.put(f"Attribute: {attr.name}")
        self.depth += 1
        if attr.description is not None:
            self.put(f"Description: {_quoted(attr.description)}")
        if attr.labeling_process_ref is not None:
            self.put(f"Labelling process: {attr.labeling_process_ref}")
        if attr.attr_type is not None:
            self.put(f"OfType: {attr.attr_type.value}")
        stats = attr.statistics
        if stats is not None:
            self.put("Statistics:")
            self.depth += 1
            if stats.mode is not None:
                if isinstance(stats.mode, str):
                    self.put(f"Mode: {_phrase(stats.mode)}")
                else:
                    self.put(f"Mode: {_number(stats.mode)}")
            if stats.mean is not None:
                self.put(f"Mean: {_number(stats.mean)}")
            if stats.median is not None:
                self.put(f"Median: {_number(stats.median)}")
            if stats.std_dev is not None:
                self.put(f"Standard-Deviation: {_number(stats.std_dev)}")
            if stats.categorical_distribution is not None:
                self.put("Categorical-Distribution:")
                self.depth += 1
                for category, pct in stats.categorical_distribution.items():
                    self.put(f"{_quoted(category)}: {_number(pct)}")
                self.depth -= 1
            if stats.completeness_pct is not None:
                self.put(f"Completeness: {_percent(stats.completeness_pct)}")
            if stats.sparsity_count is not None:
                self.put(f"Sparsity: {stats.sparsity_count}")
            self.depth -= 1
        self.depth -= 1

    def _pair_correlation(self, corr) -> None:
        self.put("Pair Correlation:")
        self.depth += 1
        if corr.external is not None:
            self.put(f"Between {corr.left} and external source")
            self.depth += 1
            if corr.external.source is not None:
                self.put(f"From: {_quoted(corr.external.source)}")
            if corr.external.rationale is not None:
                self.put(f"Rationale: {_quoted(corr.external.rationale)}")
            if corr.value is not None:
                self.put(f"Value: {_number(corr.value)}")
            self.depth -= 1
        elif corr.right is not None:
            self.put(f"Between {corr.left} and {corr.right}")
            if corr.value is not None:
                self.depth += 1
                self.put(f"Value: {_number(corr.value)}")
                self.depth -= 1
        self.depth -= 1

    # -- provenance ------------------------------------------------------------

    def provenance(self, prov) -> None:
        self.put("Data Provenance:")
        self.depth += 1
        if prov.curation_rationale is not None:
            self.put(f"Curation Rationale: {_quoted(prov.curation_rationale)}")
        if prov.gathering:
            self.put("Gathering Processes:")
            self.depth += 1
            for proc in prov.gathering:
                self._gathering(proc)
            self.depth -= 1
        if prov.labeling:
            self.put("Labeling Processes:")
            self.depth += 1
            for proc in prov.labeling:
                self._labeling(proc)
            self.depth -= 1
        self.depth -= 1

    def _gathering(self, proc) -> None:
        self.put(f"Process: {proc.name}")
        self.depth += 1
        if proc.description is not None:
            self.put(f"Description: {_quoted(proc.description)}")
        if proc.process_type is not None:
            self.put(f"Type: {_phrase(proc.process_type)}")
        for source in proc.sources:
            self.put(f"Source: {source.name}")
            self.depth += 1
            if source.description is not None:
                self.put(f"Description: {_quoted(source.description)}")
            if source.noise is not None:
                self.put(f"Noise: {_quoted(source.noise)}")
            self.depth -= 1
        if proc.social_issue_refs:
            self.put("Social Issues: " + ", ".join(proc.social_issue_refs))
        self._demographics("Process Demographics", proc.demographics)
        self._requirements("Gathering Requirements", proc.requirements)
        self.depth -= 1

    def _labeling(self, proc) -> None:
        self.put(f"Process: {proc.name}")
        self.depth += 1
        if proc.description is not None:
            self.put(f"Description: {_quoted(proc.description)}")
        if proc.process_type is not None:
            self.put(f"Type: {_phrase(proc.process_type)}")
        if proc.labels:
            self.put("Labels: " + ", ".join(proc.labels))
        team = proc.team
        if team is not None:
            self.put("Labeling Team:")
            self.depth += 1
            if team.description is not None:
                self.put(f"Description: {_quoted(team.description)}")
            if team.team_type is not None:
                self.put(f"Type: {team.team_type.value}")
            self._demographics("Team Demographics", team.demographics)
            self.depth -= 1
        if proc.social_issue_refs:
            self.put("Social Issues: " + ", ".join(proc.social_issue_refs))
        self._demographics("Process Demographics", proc.demographics)
        self._requirements("Labeling Requirements", proc.requirements)
        self.depth -= 1

    def _demographics(self, header: str, demo) -> None:
        if demo is None or demo.empty:
            return
        self.put(f"{header}:")
        self.depth += 1
        if demo.countries:
            self.put("Countries: " + ", ".join(_phrase(c) for c in demo.countries))
        for key, value in demo.other.items():
            self.put(f"{key}: {_phrase(value) if value else _quoted(value)}")
        self.depth -= 1

    def _requirements(self, header: str, requirements: list[str]) -> None:
        if not requirements:
            return
        self.put(f"{header}:")
        self.depth += 1
        for req in requirements:
            self.put(f"Requirement: {_quoted(req)}")
        self.depth -= 1

    # -- social concerns ---------------------------------------------------------

    def social_concerns(self, sc) -> None:
        self.put("Social Concerns:")
        self.depth += 1
        if sc.rationale is not None:
            self.put(f"Rationale: {_quoted(sc.rationale)}")
        for issue in sc.issues:
            self.put(f"Social Issue: {issue.name}")
            self.depth += 1
            if issue.issue_type is not None:
                self.put(f"IssueType: {_phrase(issue.issue_type.label)}")
            if issue.related_attribute_refs:
                self.put("Related Attributes: "
                         + ", ".join(issue.related_attribute_refs))
            if issue.description is not None:
                self.put(f"Description: {_quoted(issue.description)}")
            self.depth -= 1
        self.depth -= 1


def pretty_print(model: "DatasetDescription") -> str:
    printer = _Printer()
    printer.metadata(model.metadata)
    if model.composition is not None:
        printer.composition(model.composition)
    if model.provenance is not None:
        printer.provenance(model.provenance)
    if model.social_concerns is not None:
        printer.social_concerns(model.social_concerns)
    return "\n".join(printer.lines) + "\n"
