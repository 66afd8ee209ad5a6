"""Datasheet documentation generators: Markdown and standalone HTML.

Both renderers walk the model in source order (metadata, composition,
provenance, social concerns), omit absent parts entirely, and are pure
functions of the model — no timestamps, byte-identical across runs.
"""

from __future__ import annotations

import html as html_mod
from typing import Any

from .model.types import (
    Attribute,
    DataInstance,
    DatasetDescription,
    GatheringProcess,
    LabelingProcess,
    Metadata,
)
from .rules import expr_to_text


def _num(value: float) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _pct(value: float) -> str:
    return _num(value) + "%"


def _date(value: Any) -> str:
    return f"{value.day:02d}-{value.month:02d}-{value.year:04d}"


def _person(person: Any) -> str:
    return f"{person.name} <{person.email}>" if person.email else person.name


def _funder(funder: Any) -> str:
    parts = [funder.name]
    if funder.funder_type is not None:
        parts.append(f"({funder.funder_type.value})")
    if funder.grantor:
        parts.append(f"grantor {funder.grantor}")
    if funder.grant_id:
        parts.append(f"grant {funder.grant_id}")
    return " ".join(parts)


def _metadata_fields(md: Metadata) -> list[tuple[str, str]]:
    """Label/value pairs for the metadata section, absent values skipped."""
    fields: list[tuple[str, Any]] = [
        ("Unique id", md.unique_id),
        ("Version", md.version),
        ("Release date", _date(md.release_date) if md.release_date else None),
        ("Purposes", md.description.purposes),
        ("Tasks", ", ".join(md.description.tasks) or None),
        ("Gaps", md.description.gaps),
        ("Tags", ", ".join(md.tags) or None),
        ("Categories", ", ".join(md.categories) or None),
        ("Licenses", ", ".join(md.licenses) or None),
        ("Distribution policies", ", ".join(md.distribution_policies) or None),
        ("Recommended uses", "; ".join(md.applications.recommended) or None),
        ("Non-recommended uses", "; ".join(md.applications.non_recommended) or None),
        ("Past uses", "; ".join(md.applications.past_uses) or None),
        ("Contribution guidelines", md.authoring.contribution_guidelines),
        ("Authors", "; ".join(_person(p) for p in md.authoring.authors) or None),
        ("Funders", "; ".join(_funder(f) for f in md.authoring.funders) or None),
        ("Maintainers",
         "; ".join(_person(p) for p in md.authoring.maintainers) or None),
        ("Maintenance policies", md.authoring.maintenance_policies),
    ]
    return [(label, value) for label, value in fields if value]


def _attribute_rows(instance: DataInstance) -> list[list[str]]:
    rows = []
    for attr in instance.attributes:
        rows.append([
            attr.name,
            attr.attr_type.value if attr.attr_type else "",
            attr.labeling_process_ref or "",
            attr.description or "",
        ])
    return rows


def _statistic_rows(attr: Attribute) -> list[list[str]]:
    stats = attr.statistics
    if stats is None:
        return []
    rows = []
    if stats.mode is not None:
        mode = stats.mode if isinstance(stats.mode, str) else _num(stats.mode)
        rows.append([attr.name, "Mode", mode])
    if stats.mean is not None:
        rows.append([attr.name, "Mean", _num(stats.mean)])
    if stats.median is not None:
        rows.append([attr.name, "Median", _num(stats.median)])
    if stats.std_dev is not None:
        rows.append([attr.name, "Standard deviation", _num(stats.std_dev)])
    if stats.categorical_distribution is not None:
        shares = ", ".join(f"{key}: {_pct(share)}"
                           for key, share in stats.categorical_distribution.items())
        rows.append([attr.name, "Distribution", shares])
    if stats.completeness_pct is not None:
        rows.append([attr.name, "Completeness", _pct(stats.completeness_pct)])
    if stats.sparsity_count is not None:
        rows.append([attr.name, "Sparsity", str(stats.sparsity_count)])
    return rows


def _instance_notes(instance: DataInstance) -> list[str]:
    """Pair correlations, quality metrics, and rules as plain lines."""
    notes = []
    if instance.statistics is not None:
        for corr in instance.statistics.pair_correlations:
            if corr.external is not None:
                target = f"external source {corr.external.source or '?'}"
            else:
                target = corr.right or "?"
            line = f"Pair correlation: {corr.left} vs {target}"
            if corr.value is not None:
                line += f" (value {_num(corr.value)})"
            if corr.external is not None and corr.external.rationale:
                line += f" — {corr.external.rationale}"
            notes.append(line)
        for name, value in instance.statistics.quality_metrics.items():
            shown = _pct(value) if name == "Completeness" else _num(value)
            notes.append(f"Quality metric {name}: {shown}")
    for rule in instance.consistency_rules:
        notes.append(f"Rule {rule.name}: {expr_to_text(rule.expr)}")
    return notes


def _gathering_lines(proc: GatheringProcess) -> list[str]:
    lines = []
    if proc.description:
        lines.append(proc.description)
    if proc.process_type:
        lines.append(f"Type: {proc.process_type}")
    for source in proc.sources:
        line = f"Source {source.name}"
        if source.description:
            line += f": {source.description}"
        if source.noise:
            line += f" (noise: {source.noise})"
        lines.append(line)
    lines.extend(_demographic_lines(proc.demographics))
    for req in proc.requirements:
        lines.append(f"Requirement: {req}")
    if proc.social_issue_refs:
        lines.append("Social issues: " + ", ".join(proc.social_issue_refs))
    return lines


def _labeling_lines(proc: LabelingProcess) -> list[str]:
    lines = []
    if proc.description:
        lines.append(proc.description)
    if proc.process_type:
        lines.append(f"Type: {proc.process_type}")
    if proc.labels:
        lines.append("Labels: " + ", ".join(proc.labels))
    if proc.team is not None:
        team = "Team"
        if proc.team.team_type is not None:
            team += f" ({proc.team.team_type.value})"
        if proc.team.description:
            team += f": {proc.team.description}"
        lines.append(team)
        lines.extend(_demographic_lines(proc.team.demographics))
    lines.extend(_demographic_lines(proc.demographics))
    for req in proc.requirements:
        lines.append(f"Requirement: {req}")
    if proc.social_issue_refs:
        lines.append("Social issues: " + ", ".join(proc.social_issue_refs))
    return lines


def _demographic_lines(demo: Any) -> list[str]:
    if demo is None:
        return []
    lines = []
    if demo.countries:
        lines.append("Countries: " + ", ".join(demo.countries))
    for key, value in demo.other.items():
        lines.append(f"{key}: {value}")
    return lines


_ATTR_HEADER = ["Attribute", "Type", "Labeling process", "Description"]
_STAT_HEADER = ["Attribute", "Statistic", "Value"]


# --------------------------------------------------------------------------
# markdown


def _md_escape(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def _md_table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |",
             "| " + " | ".join("---" for _ in header) + " |"]
    for row in rows:
        lines.append("| " + " | ".join(_md_escape(cell) for cell in row) + " |")
    lines.append("")
    return lines


def to_markdown(model: DatasetDescription) -> str:
    out: list[str] = [f"# {model.metadata.title}", ""]

    out.append("## Metadata")
    out.append("")
    for label, value in _metadata_fields(model.metadata):
        out.append(f"- **{label}:** {_md_escape(value)}")
    out.append("")

    if model.composition is not None:
        out.append("## Composition")
        out.append("")
        if model.composition.rationale:
            out.append(model.composition.rationale)
            out.append("")
        for instance in model.composition.instances:
            out.append(f"### Instance: {instance.name}")
            out.append("")
            if instance.description:
                out.append(instance.description)
                out.append("")
            facts = []
            if instance.instance_type is not None:
                facts.append(f"- **Type:** {instance.instance_type.value}")
            if instance.size is not None:
                facts.append(f"- **Size:** {instance.size}")
            if facts:
                out.extend(facts)
                out.append("")
            if instance.attributes:
                out.extend(_md_table(_ATTR_HEADER, _attribute_rows(instance)))
            stat_rows = [row for attr in instance.attributes
                         for row in _statistic_rows(attr)]
            if stat_rows:
                out.extend(_md_table(_STAT_HEADER, stat_rows))
            notes = _instance_notes(instance)
            for note in notes:
                out.append(f"- {note}")
            if notes:
                out.append("")

    if model.provenance is not None:
        out.append("## Data Provenance")
        out.append("")
        if model.provenance.curation_rationale:
            out.append(model.provenance.curation_rationale)
            out.append("")
        for proc in model.provenance.gathering:
            out.append(f"### Gathering process: {proc.name}")
            out.append("")
            for line in _gathering_lines(proc):
                out.append(f"- {line}")
            out.append("")
        for proc in model.provenance.labeling:
            out.append(f"### Labeling process: {proc.name}")
            out.append("")
            for line in _labeling_lines(proc):
                out.append(f"- {line}")
            out.append("")

    if model.social_concerns is not None:
        out.append("## Social Concerns")
        out.append("")
        if model.social_concerns.rationale:
            out.append(model.social_concerns.rationale)
            out.append("")
        for issue in model.social_concerns.issues:
            out.append(f"### Issue: {issue.name}")
            out.append("")
            if issue.issue_type is not None:
                out.append(f"- **Type:** {issue.issue_type.label}")
            if issue.related_attribute_refs:
                out.append("- **Related attributes:** "
                           + ", ".join(issue.related_attribute_refs))
            if issue.description:
                out.append(f"- {issue.description}")
            out.append("")

    while out and out[-1] == "":
        out.pop()
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# html

_STYLE = (
    "body{font-family:system-ui,sans-serif;max-width:60rem;margin:2rem auto;"
    "padding:0 1rem;line-height:1.5}"
    "table{border-collapse:collapse;margin:0.5rem 0}"
    "th,td{border:1px solid #aaa;padding:0.25rem 0.6rem;text-align:left}"
    "h1{border-bottom:2px solid #444}"
)


def _esc(text: str) -> str:
    return html_mod.escape(text, quote=True)


def _html_table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["<table>", "<tr>" + "".join(f"<th>{_esc(h)}</th>" for h in header) + "</tr>"]
    for row in rows:
        lines.append("<tr>" + "".join(f"<td>{_esc(c)}</td>" for c in row) + "</tr>")
    lines.append("</table>")
    return lines


def _html_list(items: list[str]) -> list[str]:
    if not items:
        return []
    return ["<ul>"] + [f"<li>{_esc(item)}</li>" for item in items] + ["</ul>"]


def to_html(model: DatasetDescription) -> str:
    title = _esc(model.metadata.title)
    out = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{title}</title>",
        f"<style>{_STYLE}</style>",
        "</head>",
        "<body>",
        f"<h1>{title}</h1>",
    ]

    out.append("<section>")
    out.append("<h2>Metadata</h2>")
    out.append("<dl>")
    for label, value in _metadata_fields(model.metadata):
        out.append(f"<dt>{_esc(label)}</dt><dd>{_esc(value)}</dd>")
    out.append("</dl>")
    out.append("</section>")

    if model.composition is not None:
        out.append("<section>")
        out.append("<h2>Composition</h2>")
        if model.composition.rationale:
            out.append(f"<p>{_esc(model.composition.rationale)}</p>")
        for instance in model.composition.instances:
            out.append(f"<h3>Instance: {_esc(instance.name)}</h3>")
            if instance.description:
                out.append(f"<p>{_esc(instance.description)}</p>")
            facts = []
            if instance.instance_type is not None:
                facts.append(f"Type: {instance.instance_type.value}")
            if instance.size is not None:
                facts.append(f"Size: {instance.size}")
            out.extend(_html_list(facts))
            if instance.attributes:
                out.extend(_html_table(_ATTR_HEADER, _attribute_rows(instance)))
            stat_rows = [row for attr in instance.attributes
                         for row in _statistic_rows(attr)]
            if stat_rows:
                out.extend(_html_table(_STAT_HEADER, stat_rows))
            out.extend(_html_list(_instance_notes(instance)))
        out.append("</section>")

    if model.provenance is not None:
        out.append("<section>")
        out.append("<h2>Data Provenance</h2>")
        if model.provenance.curation_rationale:
            out.append(f"<p>{_esc(model.provenance.curation_rationale)}</p>")
        for proc in model.provenance.gathering:
            out.append(f"<h3>Gathering process: {_esc(proc.name)}</h3>")
            out.extend(_html_list(_gathering_lines(proc)))
        for proc in model.provenance.labeling:
            out.append(f"<h3>Labeling process: {_esc(proc.name)}</h3>")
            out.extend(_html_list(_labeling_lines(proc)))
        out.append("</section>")

    if model.social_concerns is not None:
        out.append("<section>")
        out.append("<h2>Social Concerns</h2>")
        if model.social_concerns.rationale:
            out.append(f"<p>{_esc(model.social_concerns.rationale)}</p>")
        for issue in model.social_concerns.issues:
            out.append(f"<h3>Issue: {_esc(issue.name)}</h3>")
            lines = []
            if issue.issue_type is not None:
                lines.append(f"Type: {issue.issue_type.label}")
            if issue.related_attribute_refs:
                lines.append("Related attributes: "
                             + ", ".join(issue.related_attribute_refs))
            if issue.description:
                lines.append(issue.description)
            out.extend(_html_list(lines))
        out.append("</section>")

    out.append("</body>")
    out.append("</html>")
    return "\n".join(out) + "\n"
