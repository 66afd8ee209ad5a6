"""Build the semantic model from a syntax tree.

Two passes: the first constructs the typed elements and declares every
name in its scope (instances; attributes per instance; gathering and
labeling processes in one shared scope; social issues), the second
resolves cross-references against those tables. Unqualified attribute
references are accepted when the bare name is unique across all
instances and are stored fully qualified.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import Diagnostic, SourceSpan, has_errors, sort_diagnostics
from ..rules import parse_rule_expr, referenced_attributes
from ..syntax.parser import parse_lenient
from ..syntax.tree import Leaf, Node, SyntaxTree
from . import types as m
from .validate import validate

_POINT = SourceSpan(1, 1, 1, 1)


@dataclass
class _Builder:
    diags: list[Diagnostic] = field(default_factory=list)
    # Spans of reference strings, keyed by (id(model element), field name),
    # so resolution errors point at the reference rather than its owner.
    ref_spans: dict[tuple[int, str], list[SourceSpan]] = field(default_factory=dict)

    def error(self, code: str, message: str, span: SourceSpan | None) -> None:
        self.diags.append(Diagnostic(code, message, span or _POINT))

    def ref_span(self, owner: object, field_name: str, index: int,
                 fallback: SourceSpan | None) -> SourceSpan | None:
        spans = self.ref_spans.get((id(owner), field_name), [])
        return spans[index] if index < len(spans) else fallback

    # -- leaf helpers -----------------------------------------------------

    @staticmethod
    def _props(node: Node, kind: str) -> list[Node]:
        return [c for c in node.children_of(kind) if isinstance(c, Node)]

    def _string(self, node: Node, kind: str) -> str | None:
        for prop in self._props(node, kind):
            leaf = prop.first_value()
            if leaf is not None:
                return str(leaf.value)
        return None

    def _number(self, node: Node, kind: str) -> float | None:
        for prop in self._props(node, kind):
            leaf = prop.first_value()
            if leaf is not None and isinstance(leaf.value, (int, float)):
                return float(leaf.value)
        return None

    def _int(self, node: Node, kind: str) -> int | None:
        for prop in self._props(node, kind):
            leaf = prop.first_value()
            if leaf is not None and isinstance(leaf.value, int):
                return leaf.value
        return None

    def _date(self, node: Node, kind: str):
        for prop in self._props(node, kind):
            leaf = prop.first_value()
            if leaf is not None:
                return leaf.value
        return None

    def _strings(self, node: Node, kind: str) -> list[str]:
        out: list[str] = []
        for prop in self._props(node, kind):
            out.extend(str(leaf.value) for leaf in prop.value_leaves())
        return out

    def _spanned(self, node: Node, kind: str) -> tuple[list[str], list[SourceSpan]]:
        values: list[str] = []
        spans: list[SourceSpan] = []
        for prop in self._props(node, kind):
            for leaf in prop.value_leaves():
                values.append(str(leaf.value))
                spans.append(leaf.span)
        return values, spans

    @staticmethod
    def _name_leaf(node: Node) -> Leaf | None:
        for child in node.children:
            if isinstance(child, Leaf) and child.kind == "Ident":
                return child
        return None

    # -- enums -------------------------------------------------------------

    def _enum(self, node: Node, kind: str, enum_cls, what: str):
        for prop in self._props(node, kind):
            leaf = prop.first_value()
            if leaf is None:
                continue
            text = str(leaf.value).strip()
            for member in enum_cls:
                if member.value.lower() == text.lower():
                    return member
            allowed = ", ".join(member.value for member in enum_cls)
            self.error("E014", f"invalid {what} '{text}' (expected one of: {allowed})",
                       leaf.span)
        return None

    # -- metadata -----------------------------------------------------------

    def metadata(self, node: Node) -> m.Metadata:
        md = m.Metadata(span=node.span)
        md.title = self._string(node, "Title") or ""
        md.version = self._string(node, "Version") or ""
        md.release_date = self._date(node, "ReleaseDate")
        unique = self._string(node, "UniqueId")
        md.unique_id = unique or m.default_unique_id(md.title, md.version)
        desc = node.child("Description")
        if isinstance(desc, Node):
            md.description = m.DescriptionInfo(
                purposes=self._string(desc, "Purposes"),
                tasks=self._strings(desc, "Tasks"),
                gaps=self._string(desc, "Gaps"),
            )
        md.tags = self._strings(node, "Tags")
        md.categories = self._strings(node, "Categories")
        md.licenses = self._strings(node, "Licenses")
        md.distribution_policies = self._strings(node, "DistributionPolicies")
        apps = node.child("Applications")
        if isinstance(apps, Node):
            md.applications = m.Applications(
                recommended=self._strings(apps, "Recommended"),
                non_recommended=self._strings(apps, "NonRecommended"),
                past_uses=self._strings(apps, "PastUses"),
            )
        authoring = node.child("Authoring")
        if isinstance(authoring, Node):
            md.authoring = self._authoring(authoring)
        return md

    def _authoring(self, node: Node) -> m.Authoring:
        out = m.Authoring(
            contribution_guidelines=self._string(node, "ContributionGuidelines"),
            maintenance_policies=self._string(node, "MaintenancePolicies"),
        )
        for wrapper, role, target in (
                ("Authors", m.ContributorRole.AUTHOR, out.authors),
                ("Maintainers", m.ContributorRole.MAINTAINER, out.maintainers)):
            group = node.child(wrapper)
            if not isinstance(group, Node):
                continue
            for entry in self._props(group, "Contributor"):
                leaf = entry.first_value()
                target.append(m.Contributor(
                    name=str(leaf.value) if leaf else "",
                    email=self._string(entry, "Email"),
                    role=role,
                    span=entry.span,
                ))
        funders = node.child("Funders")
        if isinstance(funders, Node):
            for entry in self._props(funders, "Funder"):
                leaf = entry.first_value()
                out.funders.append(m.Funder(
                    name=str(leaf.value) if leaf else "",
                    funder_type=self._enum(entry, "FunderKind", m.FunderType,
                                           "funder type"),
                    grantor=self._string(entry, "Grantor"),
                    grant_id=self._string(entry, "GrantId"),
                    span=entry.span,
                ))
        return out

    # -- composition ---------------------------------------------------------

    def composition(self, node: Node) -> m.Composition:
        comp = m.Composition(rationale=self._string(node, "Rationale"),
                             span=node.span)
        wrapper = node.child("DataInstances")
        if not isinstance(wrapper, Node):
            return comp
        seen: dict[str, SourceSpan | None] = {}
        for inst_node in self._props(wrapper, "Instance"):
            inst = self._instance(inst_node)
            if inst.name in seen:
                self.error("E011", f"duplicate instance name '{inst.name}'",
                           inst.span)
                continue
            seen[inst.name] = inst.span
            comp.instances.append(inst)
        return comp

    def _instance(self, node: Node) -> m.DataInstance:
        name_leaf = self._name_leaf(node)
        inst = m.DataInstance(
            name=name_leaf.text if name_leaf else "",
            description=self._string(node, "Description"),
            instance_type=self._enum(node, "Type", m.InstanceType, "instance type"),
            size=self._int(node, "Size"),
            span=name_leaf.span if name_leaf else node.span,
        )
        attrs = node.child("Attributes")
        if isinstance(attrs, Node):
            seen: set[str] = set()
            for attr_node in self._props(attrs, "Attribute"):
                attr = self._attribute(attr_node)
                if attr.name in seen:
                    self.error("E011",
                               f"duplicate attribute name '{attr.name}' "
                               f"in instance '{inst.name}'", attr.span)
                    continue
                seen.add(attr.name)
                inst.attributes.append(attr)
        stats = node.child("InstanceStatistics")
        if isinstance(stats, Node):
            built = self._instance_statistics(stats)
            # An empty statistics block has no printable content; normalize
            # to absent so print/parse round-trips are structurally stable.
            if built.pair_correlations or built.quality_metrics:
                inst.statistics = built
        rules = node.child("ConsistencyRules")
        if isinstance(rules, Node):
            for rule_node in self._props(rules, "ConsistencyRule"):
                rule = self._rule(rule_node)
                if rule is not None:
                    inst.consistency_rules.append(rule)
        return inst

    def _attribute(self, node: Node) -> m.Attribute:
        name_leaf = self._name_leaf(node)
        lp_refs, lp_spans = self._spanned(node, "LabelingProcessRef")
        attr = m.Attribute(
            name=name_leaf.text if name_leaf else "",
            description=self._string(node, "Description"),
            attr_type=self._enum(node, "OfType", m.AttrType, "attribute type"),
            labeling_process_ref=lp_refs[0] if lp_refs else None,
            span=name_leaf.span if name_leaf else node.span,
        )
        self.ref_spans[(id(attr), "labeling_process_ref")] = lp_spans
        stats = node.child("AttrStatistics")
        if isinstance(stats, Node):
            attr.statistics = self._attr_statistics(stats)
        return attr

    def _attr_statistics(self, node: Node) -> m.AttributeStatistics:
        stats = m.AttributeStatistics(span=node.span)
        mode = node.child("Mode")
        if isinstance(mode, Node):
            leaf = mode.first_value()
            if leaf is not None:
                stats.mode = leaf.value
        stats.mean = self._number(node, "Mean")
        stats.median = self._number(node, "Median")
        stats.std_dev = self._number(node, "StdDev")
        dist = node.child("CategoricalDistribution")
        if isinstance(dist, Node):
            entries: dict[str, float] = {}
            for entry in self._props(dist, "DistributionEntry"):
                leaves = entry.value_leaves()
                if len(leaves) >= 2:
                    entries[str(leaves[0].value)] = float(leaves[1].value)
            stats.categorical_distribution = entries
        stats.completeness_pct = self._number(node, "Completeness")
        stats.sparsity_count = self._int(node, "Sparsity")
        return stats

    def _instance_statistics(self, node: Node) -> m.InstanceStatistics:
        stats = m.InstanceStatistics(span=node.span)
        for corr_node in self._props(node, "PairCorrelation"):
            idents = [c for c in corr_node.children
                      if isinstance(c, Leaf) and c.kind == "Ident"]
            if not idents:
                continue
            corr = m.PairCorrelation(left=idents[0].text, span=corr_node.span)
            has_external = any(isinstance(c, Leaf) and c.kind == "Keyword"
                               and c.value == "ExternalSource"
                               for c in corr_node.children)
            if has_external:
                corr.external = m.ExternalSourceRef(
                    source=self._string(corr_node, "From"),
                    rationale=self._string(corr_node, "Rationale"),
                )
            elif len(idents) > 1:
                corr.right = idents[1].text
            corr.value = self._number(corr_node, "Value")
            stats.pair_correlations.append(corr)
        for qm_node in self._props(node, "QualityMetrics"):
            for metric in ("ClassBalance", "NoisyLabels", "Outliers", "Completeness"):
                value = self._number(qm_node, metric)
                if value is not None:
                    stats.quality_metrics[metric] = value
        return stats

    def _rule(self, node: Node) -> m.ConsistencyRule | None:
        idents = [c for c in node.children
                  if isinstance(c, Leaf) and c.kind == "Ident"]
        expr_leaf = next((c for c in node.children
                          if isinstance(c, Leaf) and c.kind == "Expr"), None)
        if not idents or expr_leaf is None:
            return None
        expr, expr_diags = parse_rule_expr(
            expr_leaf.text, expr_leaf.span.start_line, expr_leaf.span.start_col)
        if expr is None:
            self.diags.extend(expr_diags)
            return None
        name = idents[1].text if len(idents) > 1 else ""
        return m.ConsistencyRule(name=name, context=idents[0].text, expr=expr,
                                 span=node.span)

    # -- provenance -----------------------------------------------------------

    def provenance(self, node: Node) -> m.Provenance:
        prov = m.Provenance(
            curation_rationale=self._string(node, "CurationRationale"),
            span=node.span)
        gp = node.child("GatheringProcesses")
        if isinstance(gp, Node):
            for proc in self._props(gp, "GatheringProcess"):
                prov.gathering.append(self._gathering(proc))
        lp = node.child("LabelingProcesses")
        if isinstance(lp, Node):
            for proc in self._props(lp, "LabelingProcess"):
                prov.labeling.append(self._labeling(proc))
        return prov

    def _gathering(self, node: Node) -> m.GatheringProcess:
        name_leaf = self._name_leaf(node)
        issue_refs, issue_spans = self._spanned(node, "SocialIssues")
        proc = m.GatheringProcess(
            name=name_leaf.text if name_leaf else "",
            description=self._string(node, "Description"),
            process_type=self._string(node, "Type"),
            social_issue_refs=issue_refs,
            span=name_leaf.span if name_leaf else node.span,
        )
        self.ref_spans[(id(proc), "social_issue_refs")] = issue_spans
        for source_node in self._props(node, "Source"):
            src_name = self._name_leaf(source_node)
            proc.sources.append(m.DataSource(
                name=src_name.text if src_name else "",
                description=self._string(source_node, "Description"),
                noise=self._string(source_node, "Noise"),
                span=src_name.span if src_name else source_node.span,
            ))
        demo = node.child("Demographics")
        if isinstance(demo, Node):
            built = self._demographics(demo)
            if not built.empty:
                proc.demographics = built
        proc.requirements = self._requirements(node)
        return proc

    def _labeling(self, node: Node) -> m.LabelingProcess:
        name_leaf = self._name_leaf(node)
        labels, label_spans = self._spanned(node, "Labels")
        issue_refs, issue_spans = self._spanned(node, "SocialIssues")
        proc = m.LabelingProcess(
            name=name_leaf.text if name_leaf else "",
            description=self._string(node, "Description"),
            process_type=self._string(node, "Type"),
            labels=labels,
            social_issue_refs=issue_refs,
            span=name_leaf.span if name_leaf else node.span,
        )
        self.ref_spans[(id(proc), "labels")] = label_spans
        self.ref_spans[(id(proc), "social_issue_refs")] = issue_spans
        team_node = node.child("LabelingTeam")
        if isinstance(team_node, Node):
            team = m.Team(
                description=self._string(team_node, "Description"),
                team_type=self._enum(team_node, "Type", m.TeamType, "team type"),
                span=team_node.span,
            )
            demo = team_node.child("Demographics")
            if isinstance(demo, Node):
                built = self._demographics(demo)
                if not built.empty:
                    team.demographics = built
            proc.team = team
        demo = node.child("Demographics")
        if isinstance(demo, Node):
            built = self._demographics(demo)
            if not built.empty:
                proc.demographics = built
        proc.requirements = self._requirements(node)
        return proc

    def _demographics(self, node: Node) -> m.Demographics:
        demo = m.Demographics(countries=self._strings(node, "Countries"))
        for pair in self._props(node, "DemographicPair"):
            leaves = pair.value_leaves()
            key = next((l for l in leaves if l.kind == "DemographicKey"), None)
            value = next((l for l in leaves if l.kind != "DemographicKey"), None)
            if key is not None:
                demo.other[str(key.value)] = str(value.value) if value else ""
        return demo

    def _requirements(self, node: Node) -> list[str]:
        # All three introducing keywords produce the same node kind.
        out: list[str] = []
        for wrapper in self._props(node, "Requirements"):
            out.extend(self._strings(wrapper, "Requirement"))
        return out

    # -- social concerns -------------------------------------------------------

    def social_concerns(self, node: Node) -> m.SocialConcerns:
        sc = m.SocialConcerns(rationale=self._string(node, "Rationale"),
                              span=node.span)
        seen: set[str] = set()
        for issue_node in self._props(node, "SocialIssue"):
            name_leaf = self._name_leaf(issue_node)
            related, related_spans = self._spanned(issue_node, "RelatedAttributes")
            issue = m.SocialIssue(
                name=name_leaf.text if name_leaf else "",
                related_attribute_refs=related,
                description=self._string(issue_node, "Description"),
                span=name_leaf.span if name_leaf else issue_node.span,
            )
            self.ref_spans[(id(issue), "related_attribute_refs")] = related_spans
            type_prop = issue_node.child("IssueType")
            if isinstance(type_prop, Node):
                leaf = type_prop.first_value()
                if leaf is not None:
                    issue.issue_type = m.IssueType.from_text(str(leaf.value))
            if issue.name in seen:
                self.error("E011", f"duplicate social issue name '{issue.name}'",
                           issue.span)
                continue
            seen.add(issue.name)
            sc.issues.append(issue)
        return sc


# ------------------------------------------------------------------ resolution


def _resolve_references(model: m.DatasetDescription, builder: _Builder) -> None:
    instances = {inst.name: inst for inst in
                 (model.composition.instances if model.composition else [])}
    attr_owners: dict[str, list[str]] = {}
    qualified: set[str] = set()
    for inst in instances.values():
        for attr in inst.attributes:
            qualified.add(f"{inst.name}.{attr.name}")
            attr_owners.setdefault(attr.name, []).append(inst.name)

    processes: dict[str, str] = {}
    gathering: dict[str, m.GatheringProcess] = {}
    labeling: dict[str, m.LabelingProcess] = {}
    if model.provenance:
        for proc in model.provenance.gathering:
            if proc.name in processes:
                builder.error("E011", f"duplicate process name '{proc.name}'",
                              proc.span)
            processes[proc.name] = "gathering"
            gathering[proc.name] = proc
        for proc in model.provenance.labeling:
            if proc.name in processes:
                builder.error("E011", f"duplicate process name '{proc.name}'",
                              proc.span)
            processes[proc.name] = "labeling"
            labeling[proc.name] = proc

    issues = {issue.name for issue in
              (model.social_concerns.issues if model.social_concerns else [])}

    def resolve_attr_ref(ref: str, span: SourceSpan | None) -> str | None:
        """Return the qualified form of an attribute reference, or None."""
        if "." in ref:
            if ref in qualified:
                return ref
            head = ref.split(".", 1)[0]
            if head in instances:
                builder.error("E010", f"unresolved attribute reference '{ref}'",
                              span)
            elif head in processes or head in issues:
                builder.error("E012", f"'{head}' is not a data instance", span)
            else:
                builder.error("E010", f"unresolved attribute reference '{ref}'",
                              span)
            return None
        owners = attr_owners.get(ref, [])
        if len(owners) == 1:
            return f"{owners[0]}.{ref}"
        if len(owners) > 1:
            builder.error(
                "E010",
                f"ambiguous attribute reference '{ref}' "
                f"(declared in instances: {', '.join(sorted(owners))})", span)
            return None
        if ref in instances:
            builder.error("E012", f"'{ref}' is a data instance, not an attribute",
                          span)
        else:
            builder.error("E010", f"unresolved attribute reference '{ref}'", span)
        return None

    # labeling_process_ref on attributes, and label lists on processes
    label_links: dict[str, set[str]] = {name: set() for name in labeling}
    for inst in instances.values():
        for attr in inst.attributes:
            ref = attr.labeling_process_ref
            if ref is None:
                continue
            span = builder.ref_span(attr, "labeling_process_ref", 0, attr.span)
            if ref in labeling:
                label_links[ref].add(f"{inst.name}.{attr.name}")
            elif ref in processes:
                builder.error("E012",
                              f"'{ref}' is a gathering process, not a labeling "
                              f"process", span)
            else:
                builder.error("E010", f"unresolved labeling process '{ref}'",
                              span)

    if model.provenance:
        for proc in model.provenance.labeling:
            resolved: list[str] = []
            for index, ref in enumerate(proc.labels):
                span = builder.ref_span(proc, "labels", index, proc.span)
                target = resolve_attr_ref(ref, span)
                if target is None:
                    continue
                resolved.append(target)
                inst_name, attr_name = target.split(".", 1)
                attr = instances[inst_name].attribute(attr_name)
                if attr is not None and attr.labeling_process_ref != proc.name:
                    names = (f"process '{attr.labeling_process_ref}'"
                             if attr.labeling_process_ref else
                             "no labeling process")
                    builder.error(
                        "E013",
                        f"label '{target}' is listed by process '{proc.name}' "
                        f"but the attribute names {names}", span)
            proc.labels = resolved
            missing = label_links.get(proc.name, set()) - set(resolved)
            for target in sorted(missing):
                builder.error(
                    "E013",
                    f"attribute '{target}' names labeling process "
                    f"'{proc.name}' but is missing from its Labels list",
                    proc.span)

        for proc in list(model.provenance.gathering) + list(model.provenance.labeling):
            for index, ref in enumerate(proc.social_issue_refs):
                if ref in issues:
                    continue
                span = builder.ref_span(proc, "social_issue_refs", index, proc.span)
                if ref in instances or ref in processes:
                    builder.error("E012", f"'{ref}' is not a social issue", span)
                else:
                    builder.error("E010", f"unresolved social issue '{ref}'", span)

    if model.social_concerns:
        for issue in model.social_concerns.issues:
            resolved = []
            for index, ref in enumerate(issue.related_attribute_refs):
                span = builder.ref_span(issue, "related_attribute_refs", index,
                                        issue.span)
                target = resolve_attr_ref(ref, span)
                if target is not None:
                    resolved.append(target)
            issue.related_attribute_refs = resolved

    # pair correlations and consistency rules resolve within their instance
    for inst in instances.values():
        attr_names = {attr.name for attr in inst.attributes}
        if inst.statistics:
            for corr in inst.statistics.pair_correlations:
                for endpoint in (corr.left, corr.right):
                    if endpoint is None or endpoint in attr_names:
                        continue
                    builder.error(
                        "E010",
                        f"unresolved attribute '{endpoint}' in pair correlation "
                        f"of instance '{inst.name}'", corr.span)
        for rule in inst.consistency_rules:
            if rule.context != inst.name:
                target = instances.get(rule.context)
                if target is None:
                    builder.error("E010",
                                  f"unresolved instance '{rule.context}' "
                                  f"in consistency rule", rule.span)

    # rules whose context is another instance were attached syntactically to
    # the enclosing block; move them to their declared context
    if model.composition:
        for inst in model.composition.instances:
            keep: list[m.ConsistencyRule] = []
            for rule in inst.consistency_rules:
                if rule.context == inst.name:
                    keep.append(rule)
                    continue
                target = instances.get(rule.context)
                if target is not None:
                    target.consistency_rules.append(rule)
            inst.consistency_rules = keep
        counter = 0
        for inst in model.composition.instances:
            rule_names: set[str] = set()
            for rule in inst.consistency_rules:
                counter += 1
                if not rule.name:
                    rule.name = f"inv{counter}"
                if rule.name in rule_names:
                    builder.error("E011",
                                  f"duplicate rule name '{rule.name}' in "
                                  f"instance '{inst.name}'", rule.span)
                rule_names.add(rule.name)
                for name in sorted(referenced_attributes(rule.expr)):
                    if inst.attribute(name) is None:
                        builder.error(
                            "E030",
                            f"rule '{rule.name}' references unknown attribute "
                            f"'{name}' of instance '{inst.name}'", rule.span)


# ------------------------------------------------------------------- build API


def build_model(tree: SyntaxTree) -> tuple[m.DatasetDescription | None,
                                           list[Diagnostic]]:
    """Construct the model; returns it only when no errors were found."""
    builder = _Builder()
    root = tree.root
    md_node = root.child("Metadata")
    metadata = (builder.metadata(md_node) if isinstance(md_node, Node)
                else m.Metadata())
    model = m.DatasetDescription(metadata=metadata, span=root.span)
    comp = root.child("Composition")
    if isinstance(comp, Node):
        model.composition = builder.composition(comp)
    prov = root.child("DataProvenance")
    if isinstance(prov, Node):
        model.provenance = builder.provenance(prov)
    social = root.child("SocialConcerns")
    if isinstance(social, Node):
        model.social_concerns = builder.social_concerns(social)
    _resolve_references(model, builder)
    diags = sort_diagnostics(builder.diags)
    if has_errors(diags):
        return None, diags
    return model, diags


@dataclass
class Analysis:
    """Parse + build + validate bundle shared by the CLI and the server."""

    tree: SyntaxTree | None
    model: m.DatasetDescription | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


def analyze_source(source: str) -> Analysis:
    tree, parse_diags = parse_lenient(source)
    diags = list(parse_diags)
    if has_errors(diags):
        return Analysis(tree=tree, model=None, diagnostics=sort_diagnostics(diags))
    model, build_diags = build_model(tree)
    diags.extend(build_diags)
    if model is not None:
        diags.extend(validate(model))
    return Analysis(tree=tree, model=model,
                    diagnostics=sort_diagnostics(diags))
