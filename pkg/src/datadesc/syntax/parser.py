"""Recursive-descent parser for `.ddesc` dataset descriptions.

A document is one dataset description with up to four sections:

    Metadata:           title, version, dates, licensing, authoring
    Composition:        data instances, attributes, statistics, rules
    Data Provenance:    gathering and labeling processes
    Social Concerns:    declared social issues

Nesting is keyword-delimited; indentation is presentational only. Each
block consumes the keywords it understands and returns when it sees one
it does not, so the enclosing block can claim it. The one ambiguous
keyword — `Statistics:`, legal for both an attribute and its enclosing
instance — is settled by peeking at the first statistic inside (the two
key sets are disjoint).

On an unexpected token the parser reports E001 and skips to the next
section keyword; malformed values (E002/E003) skip to the end of the
line and the surrounding block continues. `parse` returns a tree only
for documents with zero errors; `parse_lenient` always returns the
best-effort tree (editor services use it to keep completions alive
while the user types).
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, SourceSpan
from ..rules import parse_rule_expr
from .keywords import SECTION_CANONS, SURFACES
from .scanner import ScanError, Scanner
from .tree import Leaf, Node, SyntaxTree

METADATA_KEYS = {"UniqueId", "Title", "Version", "ReleaseDate", "Description",
                 "Licenses", "Tags", "Categories", "DistributionPolicies",
                 "Applications", "Authoring"}
DESCRIPTION_KEYS = {"Purposes", "Tasks", "Gaps"}
APPLICATIONS_KEYS = {"Recommended", "NonRecommended", "PastUses"}
AUTHORING_KEYS = {"ContributionGuidelines", "Authors", "Funders", "Maintainers",
                  "MaintenancePolicies"}
FUNDER_FIELD_KEYS = {"FunderKind", "Grantor", "GrantId"}
COMPOSITION_KEYS = {"Rationale", "DataInstances"}
INSTANCE_KEYS = {"Description", "Type", "Size", "Attributes", "Statistics",
                 "ConsistencyRules"}
ATTRIBUTE_KEYS = {"Description", "LabelingProcessRef", "OfType", "Statistics"}
ATTR_STAT_KEYS = {"Mode", "Mean", "Median", "StdDev", "CategoricalDistribution",
                  "Completeness", "Sparsity"}
INSTANCE_STAT_KEYS = {"PairCorrelation", "QualityMetrics"}
QUALITY_METRIC_KEYS = {"ClassBalance", "NoisyLabels", "Outliers", "Completeness"}
PROVENANCE_KEYS = {"CurationRationale", "GatheringProcesses", "LabelingProcesses"}
GATHERING_KEYS = {"Description", "Type", "Source", "SocialIssues",
                  "ProcessDemographics", "GatheringRequirements", "Requirements"}
LABELING_KEYS = {"Description", "Type", "Labels", "LabelingTeam", "SocialIssues",
                 "ProcessDemographics", "LabelingRequirements", "Requirements"}
SOURCE_KEYS = {"Description", "Noise"}
TEAM_KEYS = {"Description", "Type", "TeamDemographics"}
SOCIAL_KEYS = {"Rationale", "SocialIssue"}
ISSUE_KEYS = {"IssueType", "RelatedAttributes", "Description"}

# Scalar properties may appear once per block; list-like ones accumulate.
_REPEATABLE = {"Licenses", "Tags", "Categories", "DistributionPolicies",
               "Recommended", "NonRecommended", "PastUses", "Tasks",
               "SocialIssues", "Labels", "Countries", "RelatedAttributes"}


class Parser:
    def __init__(self, source: str):
        self.sc = Scanner(source)
        self.diags: list[Diagnostic] = []

    # ------------------------------------------------------------------ util

    def _diag(self, code: str, message: str, span: SourceSpan) -> None:
        self.diags.append(Diagnostic(code, message, span))

    def _scan_error(self, err: ScanError) -> None:
        self._diag(err.code, err.message, err.span)
        self.sc.skip_to_eol()

    def _take_kw(self, allowed: set[str]) -> Leaf:
        canon, raw, span = self.sc.take_keyword(allowed)  # type: ignore[misc]
        leaf = Leaf("Keyword", raw, span, value=canon)
        return leaf

    def _peek(self, allowed: set[str]) -> str | None:
        found = self.sc.peek_keyword(allowed)
        return found[0] if found else None

    def _mark_seen(self, seen: set[str], canon: str, span: SourceSpan, where: str) -> None:
        if canon in _REPEATABLE:
            return
        if canon in seen:
            self._diag("E001", f"duplicate property '{SURFACES[canon]}' in {where}", span)
        seen.add(canon)

    # ------------------------------------------------------------- properties

    def _prop_string(self, kw: Leaf) -> Node:
        node = Node(kw.value, [kw])  # type: ignore[arg-type]
        try:
            value, raw, span = self.sc.take_string()
            node.children.append(Leaf("String", raw, span, value=value))
        except ScanError as err:
            self._scan_error(err)
        return node.finish()

    def _prop_ident(self, kw: Leaf, what: str = "identifier") -> Node:
        node = Node(kw.value, [kw])
        try:
            text, span = self.sc.take_ident(what)
            node.children.append(Leaf("Ident", text, span, value=text))
        except ScanError as err:
            self._scan_error(err)
        return node.finish()

    def _prop_phrase(self, kw: Leaf) -> Node:
        node = Node(kw.value, [kw])
        item = self.sc.capture_phrase(stop_at_comma=False)
        if item is not None:
            cooked, raw, quoted, span = item
            kind = "String" if quoted else "Phrase"
            node.children.append(Leaf(kind, raw, span, value=cooked))
        return node.finish()

    def _prop_phrase_list(self, kw: Leaf) -> Node:
        node = Node(kw.value, [kw])
        while True:
            try:
                item = self.sc.capture_phrase(stop_at_comma=True)
            except ScanError as err:
                self._scan_error(err)
                break
            if item is not None:
                cooked, raw, quoted, span = item
                node.children.append(
                    Leaf("String" if quoted else "Phrase", raw, span, value=cooked))
            comma = self.sc.try_punct(",")
            if comma is None:
                break
            node.children.append(Leaf("Punct", comma[0], comma[1]))
        return node.finish()

    def _prop_string_list(self, kw: Leaf) -> Node:
        node = Node(kw.value, [kw])
        if self.sc.at_line_end():
            return node.finish()
        while True:
            try:
                value, raw, span = self.sc.take_string()
                node.children.append(Leaf("String", raw, span, value=value))
            except ScanError as err:
                self._scan_error(err)
                break
            comma = self.sc.try_punct(",")
            if comma is None:
                break
            node.children.append(Leaf("Punct", comma[0], comma[1]))
        return node.finish()

    def _prop_reference_list(self, kw: Leaf) -> Node:
        """Comma-separated plain or dotted names (`a`, `inst.attr`)."""
        node = Node(kw.value, [kw])
        if self.sc.at_line_end():
            return node.finish()
        while True:
            try:
                text, span = self.sc.take_qualname()
                node.children.append(Leaf("QualName", text, span, value=text))
            except ScanError as err:
                self._scan_error(err)
                break
            comma = self.sc.try_punct(",")
            if comma is None:
                break
            node.children.append(Leaf("Punct", comma[0], comma[1]))
        return node.finish()

    def _prop_int(self, kw: Leaf, what: str) -> Node:
        node = Node(kw.value, [kw])
        try:
            value, raw, span = self.sc.take_int(what)
            node.children.append(Leaf("Int", raw, span, value=value))
        except ScanError as err:
            self._scan_error(err)
        return node.finish()

    def _prop_number(self, kw: Leaf, what: str) -> Node:
        node = Node(kw.value, [kw])
        try:
            value, raw, span = self.sc.take_number(what)
            node.children.append(Leaf("Number", raw, span, value=value))
        except ScanError as err:
            self._scan_error(err)
        return node.finish()

    def _prop_percent(self, kw: Leaf) -> Node:
        node = Node(kw.value, [kw])
        try:
            value, raw, percent, span = self.sc.take_percent_or_number()
            node.children.append(
                Leaf("Percent" if percent else "Number", raw, span, value=value))
        except ScanError as err:
            self._scan_error(err)
        return node.finish()

    def _prop_date(self, kw: Leaf) -> Node:
        node = Node(kw.value, [kw])
        try:
            value, raw, span = self.sc.take_date()
            node.children.append(Leaf("Date", raw, span, value=value))
        except ScanError as err:
            self._scan_error(err)
        return node.finish()

    # ---------------------------------------------------------------- document

    def parse_document(self) -> SyntaxTree:
        doc = Node("Document")
        seen: set[str] = set()
        self.sc.skip_trivia()
        if self._peek({"Metadata"}):
            doc.children.append(self.metadata_section())
            seen.add("Metadata")
        else:
            self._diag("E001", "expected 'Metadata:' at the start of the document",
                       self.sc.point_span())
        while True:
            self.sc.skip_trivia()
            if self.sc.at_eof:
                break
            canon = self._peek(set(SECTION_CANONS))
            if canon is None:
                self._diag("E001", "unexpected token; expected a section keyword",
                           self.sc.point_span())
                self.sc.skip_to_next_section(SECTION_CANONS)
                continue
            if canon in seen:
                kw = self._take_kw(set(SECTION_CANONS))
                self._diag("E001", f"duplicate section '{SURFACES[canon]}'", kw.span)
                self.sc.skip_to_next_section(SECTION_CANONS)
                continue
            seen.add(canon)
            if canon == "Metadata":
                doc.children.append(self.metadata_section())
            elif canon == "Composition":
                doc.children.append(self.composition_section())
            elif canon == "DataProvenance":
                doc.children.append(self.provenance_section())
            else:
                doc.children.append(self.social_section())
        if not doc.children:
            doc.span = SourceSpan(1, 1, 1, 1)
            return SyntaxTree(doc)
        return SyntaxTree(doc.finish())

    # ---------------------------------------------------------------- metadata

    def metadata_section(self) -> Node:
        node = Node("Metadata", [self._take_kw({"Metadata"})])
        seen: set[str] = set()
        while True:
            canon = self._peek(METADATA_KEYS)
            if canon is None:
                return node.finish()
            kw = self._take_kw(METADATA_KEYS)
            self._mark_seen(seen, canon, kw.span, "Metadata")
            if canon in ("Title",):
                node.children.append(self._prop_string(kw))
            elif canon == "Version":
                node.children.append(self._prop_ident(kw, "version identifier"))
            elif canon == "UniqueId":
                node.children.append(self._prop_phrase(kw))
            elif canon == "ReleaseDate":
                node.children.append(self._prop_date(kw))
            elif canon == "Description":
                node.children.append(self._metadata_description(kw))
            elif canon in ("Licenses", "Tags", "Categories", "DistributionPolicies"):
                node.children.append(self._prop_phrase_list(kw))
            elif canon == "Applications":
                node.children.append(self._applications(kw))
            else:  # Authoring
                node.children.append(self._authoring(kw))

    def _metadata_description(self, kw: Leaf) -> Node:
        node = Node("Description", [kw])
        seen: set[str] = set()
        while True:
            canon = self._peek(DESCRIPTION_KEYS)
            if canon is None:
                return node.finish()
            inner = self._take_kw(DESCRIPTION_KEYS)
            self._mark_seen(seen, canon, inner.span, "Description")
            if canon == "Tasks":
                node.children.append(self._prop_phrase_list(inner))
            else:
                node.children.append(self._prop_string(inner))

    def _applications(self, kw: Leaf) -> Node:
        node = Node("Applications", [kw])
        while True:
            canon = self._peek(APPLICATIONS_KEYS)
            if canon is None:
                return node.finish()
            node.children.append(self._prop_string_list(self._take_kw(APPLICATIONS_KEYS)))

    def _authoring(self, kw: Leaf) -> Node:
        node = Node("Authoring", [kw])
        seen: set[str] = set()
        while True:
            canon = self._peek(AUTHORING_KEYS)
            if canon is None:
                return node.finish()
            inner = self._take_kw(AUTHORING_KEYS)
            self._mark_seen(seen, canon, inner.span, "Authoring")
            if canon in ("ContributionGuidelines", "MaintenancePolicies"):
                node.children.append(self._prop_string(inner))
            elif canon == "Funders":
                node.children.append(self._funders(inner))
            else:  # Authors / Maintainers
                node.children.append(self._contributors(inner, canon))

    def _contributors(self, kw: Leaf, canon: str) -> Node:
        node = Node(canon, [kw])
        while self._peek({"Name"}):
            entry = Node("Contributor", [self._take_kw({"Name"})])
            try:
                value, raw, span = self.sc.take_string()
                entry.children.append(Leaf("String", raw, span, value=value))
            except ScanError as err:
                self._scan_error(err)
            while self._peek({"Email"}):
                entry.children.append(self._prop_string(self._take_kw({"Email"})))
            node.children.append(entry.finish())
        return node.finish()

    def _funders(self, kw: Leaf) -> Node:
        node = Node("Funders", [kw])
        while self._peek({"Name"}):
            entry = Node("Funder", [self._take_kw({"Name"})])
            try:
                value, raw, span = self.sc.take_string()
                entry.children.append(Leaf("String", raw, span, value=value))
            except ScanError as err:
                self._scan_error(err)
            while True:
                field = self._peek(FUNDER_FIELD_KEYS)
                if field is None:
                    break
                fkw = self._take_kw(FUNDER_FIELD_KEYS)
                if field == "FunderKind":
                    entry.children.append(self._prop_ident(fkw, "funder type"))
                elif field == "Grantor":
                    entry.children.append(self._prop_string(fkw))
                else:  # GrantId
                    entry.children.append(self._prop_ident(fkw, "grant id"))
            node.children.append(entry.finish())
        return node.finish()

    # ------------------------------------------------------------- composition

    def composition_section(self) -> Node:
        node = Node("Composition", [self._take_kw({"Composition"})])
        seen: set[str] = set()
        while True:
            canon = self._peek(COMPOSITION_KEYS)
            if canon is None:
                return node.finish()
            kw = self._take_kw(COMPOSITION_KEYS)
            self._mark_seen(seen, canon, kw.span, "Composition")
            if canon == "Rationale":
                node.children.append(self._prop_string(kw))
            else:
                node.children.append(self._data_instances(kw))

    def _data_instances(self, kw: Leaf) -> Node:
        node = Node("DataInstances", [kw])
        while self._peek({"Instance"}):
            node.children.append(self._instance())
        return node.finish()

    def _instance(self) -> Node:
        node = Node("Instance", [self._take_kw({"Instance"})])
        try:
            name, span = self.sc.take_ident("instance name")
            node.children.append(Leaf("Ident", name, span, value=name))
        except ScanError as err:
            self._scan_error(err)
        seen: set[str] = set()
        while True:
            canon = self._peek(INSTANCE_KEYS)
            if canon is None:
                return node.finish()
            kw = self._take_kw(INSTANCE_KEYS)
            self._mark_seen(seen, canon, kw.span, "Instance")
            if canon == "Description":
                node.children.append(self._prop_string(kw))
            elif canon == "Type":
                node.children.append(self._prop_phrase(kw))
            elif canon == "Size":
                node.children.append(self._prop_int(kw, "size"))
            elif canon == "Attributes":
                attrs = Node("Attributes", [kw])
                while self._peek({"Attribute"}):
                    attrs.children.append(self._attribute())
                node.children.append(attrs.finish())
            elif canon == "Statistics":
                node.children.append(self._instance_statistics(kw))
            else:  # ConsistencyRules
                rules = Node("ConsistencyRules", [kw])
                while self._peek({"Inv"}):
                    rules.children.append(self._consistency_rule())
                node.children.append(rules.finish())

    def _attribute(self) -> Node:
        node = Node("Attribute", [self._take_kw({"Attribute"})])
        try:
            name, span = self.sc.take_ident("attribute name")
            node.children.append(Leaf("Ident", name, span, value=name))
        except ScanError as err:
            self._scan_error(err)
        seen: set[str] = set()
        while True:
            canon = self._peek(ATTRIBUTE_KEYS)
            if canon is None:
                return node.finish()
            if canon == "Statistics":
                # Disambiguate against the enclosing instance's statistics by
                # the first statistic key inside the block.
                mark = self.sc.mark()
                kw = self._take_kw({"Statistics"})
                following = self._peek(ATTR_STAT_KEYS | INSTANCE_STAT_KEYS)
                if following in INSTANCE_STAT_KEYS:
                    self.sc.rewind(mark)
                    return node.finish()
                self._mark_seen(seen, canon, kw.span, "Attribute")
                node.children.append(self._attribute_statistics(kw))
                continue
            kw = self._take_kw(ATTRIBUTE_KEYS)
            self._mark_seen(seen, canon, kw.span, "Attribute")
            if canon == "Description":
                node.children.append(self._prop_string(kw))
            elif canon == "LabelingProcessRef":
                node.children.append(self._prop_ident(kw, "labeling process name"))
            else:  # OfType
                node.children.append(self._prop_ident(kw, "attribute type"))

    def _attribute_statistics(self, kw: Leaf) -> Node:
        node = Node("AttrStatistics", [kw])
        seen: set[str] = set()
        while True:
            canon = self._peek(ATTR_STAT_KEYS)
            if canon is None:
                return node.finish()
            inner = self._take_kw(ATTR_STAT_KEYS)
            self._mark_seen(seen, canon, inner.span, "Statistics")
            if canon == "Mode":
                node.children.append(self._mode_prop(inner))
            elif canon in ("Mean", "Median", "StdDev"):
                node.children.append(self._prop_number(inner, SURFACES[canon].rstrip(":")))
            elif canon == "CategoricalDistribution":
                node.children.append(self._distribution(inner))
            elif canon == "Completeness":
                node.children.append(self._prop_percent(inner))
            else:  # Sparsity
                node.children.append(self._prop_int(inner, "sparsity count"))

    def _mode_prop(self, kw: Leaf) -> Node:
        """`Mode:` takes a number, a quoted string, or a bare phrase."""
        node = Node("Mode", [kw])
        item = self.sc.capture_phrase(stop_at_comma=False)
        if item is not None:
            cooked, raw, quoted, span = item
            if quoted:
                node.children.append(Leaf("String", raw, span, value=cooked))
            else:
                try:
                    number = float(raw)
                    node.children.append(Leaf("Number", raw, span, value=number))
                except ValueError:
                    node.children.append(Leaf("Phrase", raw, span, value=cooked))
        return node.finish()

    def _distribution(self, kw: Leaf) -> Node:
        node = Node("CategoricalDistribution", [kw])
        while True:
            self.sc.skip_trivia()
            if not self.sc.text.startswith('"', self.sc.pos):
                return node.finish()
            entry = Node("DistributionEntry")
            try:
                value, raw, span = self.sc.take_string()
                entry.children.append(Leaf("String", raw, span, value=value))
                colon = self.sc.take_punct(":")
                entry.children.append(Leaf("Punct", colon[0], colon[1]))
                num, nraw, percent, nspan = self.sc.take_percent_or_number()
                entry.children.append(
                    Leaf("Percent" if percent else "Number", nraw, nspan, value=num))
            except ScanError as err:
                self._scan_error(err)
            node.children.append(entry.finish())

    def _instance_statistics(self, kw: Leaf) -> Node:
        node = Node("InstanceStatistics", [kw])
        while True:
            canon = self._peek(INSTANCE_STAT_KEYS)
            if canon is None:
                return node.finish()
            inner = self._take_kw(INSTANCE_STAT_KEYS)
            if canon == "PairCorrelation":
                node.children.append(self._pair_correlation(inner))
            else:
                node.children.append(self._quality_metrics(inner))

    def _pair_correlation(self, kw: Leaf) -> Node:
        node = Node("PairCorrelation", [kw])
        if not self._peek({"Between"}):
            self._diag("E001", "expected 'Between' after 'Pair Correlation:'",
                       self.sc.point_span())
            return node.finish()
        node.children.append(self._take_kw({"Between"}))
        try:
            left, span = self.sc.take_ident("attribute name")
            node.children.append(Leaf("Ident", left, span, value=left))
            if not self._peek({"AndWord"}):
                raise ScanError("E001", "expected 'and' in pair correlation",
                                self.sc.point_span())
            node.children.append(self._take_kw({"AndWord"}))
            if self._peek({"ExternalSource"}):
                node.children.append(self._take_kw({"ExternalSource"}))
            else:
                right, rspan = self.sc.take_ident("attribute name")
                node.children.append(Leaf("Ident", right, rspan, value=right))
        except ScanError as err:
            self._scan_error(err)
            return node.finish()
        while True:
            canon = self._peek({"From", "Rationale", "Value"})
            if canon is None:
                return node.finish()
            inner = self._take_kw({"From", "Rationale", "Value"})
            if canon == "Value":
                node.children.append(self._prop_number(inner, "correlation value"))
            else:
                node.children.append(self._prop_string(inner))

    def _quality_metrics(self, kw: Leaf) -> Node:
        node = Node("QualityMetrics", [kw])
        while True:
            canon = self._peek(QUALITY_METRIC_KEYS)
            if canon is None:
                return node.finish()
            inner = self._take_kw(QUALITY_METRIC_KEYS)
            node.children.append(self._prop_percent(inner))

    def _consistency_rule(self) -> Node:
        node = Node("ConsistencyRule", [self._take_kw({"Inv"})])
        try:
            context, span = self.sc.take_ident("instance name after 'Inv'")
            node.children.append(Leaf("Ident", context, span, value=context))
            colon = self.sc.try_punct(":")
            if colon is None:
                name, nspan = self.sc.take_ident("rule name or ':'")
                node.children.append(Leaf("Ident", name, nspan, value=name))
                colon = self.sc.take_punct(":")
            node.children.append(Leaf("Punct", colon[0], colon[1]))
            text, tspan = self.sc.capture_to_eol()
            if not text:
                self._diag("E001", "expected a rule expression", self.sc.point_span())
                return node.finish()
            node.children.append(Leaf("Expr", text, tspan, value=text))
            # Surface expression syntax errors at parse time; the model
            # builder re-parses the text when constructing the rule.
            _, expr_diags = parse_rule_expr(text, tspan.start_line, tspan.start_col)
            self.diags.extend(expr_diags)
        except ScanError as err:
            self._scan_error(err)
        return node.finish()

    # -------------------------------------------------------------- provenance

    def provenance_section(self) -> Node:
        node = Node("DataProvenance", [self._take_kw({"DataProvenance"})])
        seen: set[str] = set()
        while True:
            canon = self._peek(PROVENANCE_KEYS)
            if canon is None:
                return node.finish()
            kw = self._take_kw(PROVENANCE_KEYS)
            self._mark_seen(seen, canon, kw.span, "Data Provenance")
            if canon == "CurationRationale":
                node.children.append(self._prop_string(kw))
            elif canon == "GatheringProcesses":
                wrapper = Node("GatheringProcesses", [kw])
                while self._peek({"Process"}):
                    wrapper.children.append(
                        self._process("GatheringProcess", GATHERING_KEYS))
                node.children.append(wrapper.finish())
            else:
                wrapper = Node("LabelingProcesses", [kw])
                while self._peek({"Process"}):
                    wrapper.children.append(
                        self._process("LabelingProcess", LABELING_KEYS))
                node.children.append(wrapper.finish())

    def _process(self, kind: str, keys: set[str]) -> Node:
        node = Node(kind, [self._take_kw({"Process"})])
        try:
            name, span = self.sc.take_ident("process name")
            node.children.append(Leaf("Ident", name, span, value=name))
        except ScanError as err:
            self._scan_error(err)
        seen: set[str] = set()
        while True:
            canon = self._peek(keys)
            if canon is None:
                return node.finish()
            kw = self._take_kw(keys)
            if canon != "Source":  # sources repeat
                self._mark_seen(seen, canon, kw.span, "Process")
            if canon == "Description":
                node.children.append(self._prop_string(kw))
            elif canon == "Type":
                node.children.append(self._prop_phrase(kw))
            elif canon == "Source":
                node.children.append(self._source(kw))
            elif canon == "SocialIssues":
                node.children.append(self._prop_reference_list(kw))
            elif canon == "Labels":
                node.children.append(self._prop_reference_list(kw))
            elif canon == "ProcessDemographics":
                node.children.append(self._demographics(kw))
            elif canon == "LabelingTeam":
                node.children.append(self._team(kw))
            else:  # requirements blocks
                node.children.append(self._requirements(kw))

    def _source(self, kw: Leaf) -> Node:
        node = Node("Source", [kw])
        try:
            name, span = self.sc.take_ident("source name")
            node.children.append(Leaf("Ident", name, span, value=name))
        except ScanError as err:
            self._scan_error(err)
        seen: set[str] = set()
        while True:
            canon = self._peek(SOURCE_KEYS)
            if canon is None:
                return node.finish()
            inner = self._take_kw(SOURCE_KEYS)
            self._mark_seen(seen, canon, inner.span, "Source")
            node.children.append(self._prop_string(inner))

    def _team(self, kw: Leaf) -> Node:
        node = Node("LabelingTeam", [kw])
        seen: set[str] = set()
        while True:
            canon = self._peek(TEAM_KEYS)
            if canon is None:
                return node.finish()
            inner = self._take_kw(TEAM_KEYS)
            self._mark_seen(seen, canon, inner.span, "Labeling Team")
            if canon == "Description":
                node.children.append(self._prop_string(inner))
            elif canon == "Type":
                node.children.append(self._prop_ident(inner, "team type"))
            else:
                node.children.append(self._demographics(inner))

    def _demographics(self, kw: Leaf) -> Node:
        node = Node("Demographics", [kw])
        while True:
            if self._peek({"Countries"}):
                node.children.append(self._prop_phrase_list(self._take_kw({"Countries"})))
                continue
            if self.sc.peek_keyword() is not None:
                return node.finish()
            if not self.sc.peek_free_key():
                return node.finish()
            pair = Node("DemographicPair")
            key, raw, span = self.sc.take_free_key()
            pair.children.append(Leaf("DemographicKey", raw, span, value=key))
            item = self.sc.capture_phrase(stop_at_comma=False)
            if item is not None:
                cooked, praw, quoted, pspan = item
                pair.children.append(
                    Leaf("String" if quoted else "Phrase", praw, pspan, value=cooked))
            node.children.append(pair.finish())

    def _requirements(self, kw: Leaf) -> Node:
        node = Node("Requirements", [kw])
        while self._peek({"Requirement"}):
            node.children.append(self._prop_string(self._take_kw({"Requirement"})))
        return node.finish()

    # ---------------------------------------------------------- social concerns

    def social_section(self) -> Node:
        node = Node("SocialConcerns", [self._take_kw({"SocialConcerns"})])
        seen: set[str] = set()
        while True:
            canon = self._peek(SOCIAL_KEYS)
            if canon is None:
                return node.finish()
            kw = self._take_kw(SOCIAL_KEYS)
            if canon == "Rationale":
                self._mark_seen(seen, canon, kw.span, "Social Concerns")
                node.children.append(self._prop_string(kw))
            else:
                node.children.append(self._social_issue(kw))

    def _social_issue(self, kw: Leaf) -> Node:
        node = Node("SocialIssue", [kw])
        try:
            name, span = self.sc.take_ident("issue name")
            node.children.append(Leaf("Ident", name, span, value=name))
        except ScanError as err:
            self._scan_error(err)
        seen: set[str] = set()
        while True:
            canon = self._peek(ISSUE_KEYS)
            if canon is None:
                return node.finish()
            inner = self._take_kw(ISSUE_KEYS)
            self._mark_seen(seen, canon, inner.span, "Social Issue")
            if canon == "IssueType":
                node.children.append(self._prop_phrase(inner))
            elif canon == "RelatedAttributes":
                node.children.append(self._prop_reference_list(inner))
            else:
                node.children.append(self._prop_string(inner))


def parse_lenient(source: str) -> tuple[SyntaxTree, list[Diagnostic]]:
    """Parse with error recovery; always returns a (possibly partial) tree."""
    parser = Parser(source)
    tree = parser.parse_document()
    return tree, parser.diags


def parse(source: str) -> tuple[SyntaxTree | None, list[Diagnostic]]:
    """Parse a document; the tree is returned only when there are no errors."""
    tree, diags = parse_lenient(source)
    if any(d.severity.value == "error" for d in diags):
        return None, diags
    return tree, diags
