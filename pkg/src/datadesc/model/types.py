"""Typed semantic model of a dataset description.

The model mirrors the language: metadata, composition, data provenance,
and social concerns. References between elements (labeling processes,
social issues, attributes) are stored as canonical name strings —
`"skinImages.benignant_malignant"` — rather than object pointers, which
keeps the model acyclic, hashable where needed, and trivially
serializable. Every element carries an optional source span for
diagnostics; spans are excluded from equality so that a model survives
a print/parse round-trip structurally intact.
"""

from __future__ import annotations

import datetime
import enum
import re
from dataclasses import dataclass, field
from typing import ClassVar

from ..diagnostics import SourceSpan
from ..rules import RuleExpr


def _span_field():
    return field(default=None, compare=False, repr=False)


class InstanceType(enum.Enum):
    RECORD_DATA = "Record-Data"
    TIME_SERIES = "Time-Series"
    LINKED_DATA = "Linked-Data"


class AttrType(enum.Enum):
    NUMERICAL = "Numerical"
    CATEGORICAL = "Categorical"


class TeamType(enum.Enum):
    CROWDSOURCING = "Crowdsourcing"
    EXTERNAL = "External"
    INTERNAL = "Internal"


class FunderType(enum.Enum):
    PUBLIC = "public"
    PRIVATE = "private"
    MIXED = "mixed"


class ContributorRole(enum.Enum):
    AUTHOR = "Author"
    MAINTAINER = "Maintainer"


@dataclass(frozen=True)
class IssueType:
    """Closed pair Bias/Privacy plus an open escape hatch.

    `kind` is one of "Bias", "Privacy", "Other"; `label` is the surface
    phrase (equal to kind for the closed values).
    """

    kind: str
    label: str

    BIAS: ClassVar["IssueType"]
    PRIVACY: ClassVar["IssueType"]

    @staticmethod
    def from_text(text: str) -> "IssueType":
        lowered = text.strip().lower()
        if lowered == "bias":
            return IssueType.BIAS
        if lowered == "privacy":
            return IssueType.PRIVACY
        return IssueType("Other", text.strip())


IssueType.BIAS = IssueType("Bias", "Bias")
IssueType.PRIVACY = IssueType("Privacy", "Privacy")


def slugify(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "dataset"


def default_unique_id(title: str, version: str) -> str:
    return f"{slugify(title)}-{version}" if version else slugify(title)


# --------------------------------------------------------------------------
# metadata


@dataclass
class Contributor:
    name: str
    email: str | None = None
    role: ContributorRole = ContributorRole.AUTHOR
    span: SourceSpan | None = _span_field()


@dataclass
class Funder:
    name: str
    funder_type: FunderType | None = None
    grantor: str | None = None
    grant_id: str | None = None
    span: SourceSpan | None = _span_field()


@dataclass
class DescriptionInfo:
    purposes: str | None = None
    tasks: list[str] = field(default_factory=list)
    gaps: str | None = None


@dataclass
class Applications:
    recommended: list[str] = field(default_factory=list)
    non_recommended: list[str] = field(default_factory=list)
    past_uses: list[str] = field(default_factory=list)


@dataclass
class Authoring:
    contribution_guidelines: str | None = None
    authors: list[Contributor] = field(default_factory=list)
    funders: list[Funder] = field(default_factory=list)
    maintainers: list[Contributor] = field(default_factory=list)
    maintenance_policies: str | None = None


@dataclass
class Metadata:
    unique_id: str = ""
    title: str = ""
    version: str = ""
    release_date: datetime.date | None = None
    description: DescriptionInfo = field(default_factory=DescriptionInfo)
    tags: list[str] = field(default_factory=list)
    categories: list[str] = field(default_factory=list)
    licenses: list[str] = field(default_factory=list)
    distribution_policies: list[str] = field(default_factory=list)
    applications: Applications = field(default_factory=Applications)
    authoring: Authoring = field(default_factory=Authoring)
    span: SourceSpan | None = _span_field()


# --------------------------------------------------------------------------
# composition


@dataclass
class AttributeStatistics:
    mode: float | str | None = None
    mean: float | None = None
    median: float | None = None
    std_dev: float | None = None
    categorical_distribution: dict[str, float] | None = None
    completeness_pct: float | None = None
    sparsity_count: int | None = None
    span: SourceSpan | None = _span_field()


@dataclass
class Attribute:
    name: str
    description: str | None = None
    attr_type: AttrType | None = None
    labeling_process_ref: str | None = None
    statistics: AttributeStatistics | None = None
    span: SourceSpan | None = _span_field()


@dataclass
class ExternalSourceRef:
    source: str | None = None
    rationale: str | None = None


@dataclass
class PairCorrelation:
    left: str
    right: str | None = None
    external: ExternalSourceRef | None = None
    value: float | None = None
    span: SourceSpan | None = _span_field()


@dataclass
class InstanceStatistics:
    pair_correlations: list[PairCorrelation] = field(default_factory=list)
    quality_metrics: dict[str, float] = field(default_factory=dict)
    span: SourceSpan | None = _span_field()


@dataclass
class ConsistencyRule:
    name: str
    context: str
    expr: RuleExpr
    span: SourceSpan | None = _span_field()


@dataclass
class DataInstance:
    name: str
    description: str | None = None
    instance_type: InstanceType | None = None
    size: int | None = None
    attributes: list[Attribute] = field(default_factory=list)
    statistics: InstanceStatistics | None = None
    consistency_rules: list[ConsistencyRule] = field(default_factory=list)
    span: SourceSpan | None = _span_field()

    def attribute(self, name: str) -> Attribute | None:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None


@dataclass
class Composition:
    rationale: str | None = None
    instances: list[DataInstance] = field(default_factory=list)
    span: SourceSpan | None = _span_field()


# --------------------------------------------------------------------------
# provenance


@dataclass
class Demographics:
    countries: list[str] = field(default_factory=list)
    other: dict[str, str] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.countries and not self.other


@dataclass
class DataSource:
    name: str
    description: str | None = None
    noise: str | None = None
    span: SourceSpan | None = _span_field()


@dataclass
class Team:
    description: str | None = None
    team_type: TeamType | None = None
    demographics: Demographics | None = None
    span: SourceSpan | None = _span_field()


@dataclass
class GatheringProcess:
    name: str
    description: str | None = None
    process_type: str | None = None
    sources: list[DataSource] = field(default_factory=list)
    social_issue_refs: list[str] = field(default_factory=list)
    demographics: Demographics | None = None
    requirements: list[str] = field(default_factory=list)
    span: SourceSpan | None = _span_field()


@dataclass
class LabelingProcess:
    name: str
    description: str | None = None
    process_type: str | None = None
    labels: list[str] = field(default_factory=list)
    team: Team | None = None
    requirements: list[str] = field(default_factory=list)
    social_issue_refs: list[str] = field(default_factory=list)
    demographics: Demographics | None = None
    span: SourceSpan | None = _span_field()


@dataclass
class Provenance:
    curation_rationale: str | None = None
    gathering: list[GatheringProcess] = field(default_factory=list)
    labeling: list[LabelingProcess] = field(default_factory=list)
    span: SourceSpan | None = _span_field()


# --------------------------------------------------------------------------
# social concerns


@dataclass
class SocialIssue:
    name: str
    issue_type: IssueType | None = None
    related_attribute_refs: list[str] = field(default_factory=list)
    description: str | None = None
    span: SourceSpan | None = _span_field()


@dataclass
class SocialConcerns:
    rationale: str | None = None
    issues: list[SocialIssue] = field(default_factory=list)
    span: SourceSpan | None = _span_field()


# --------------------------------------------------------------------------


@dataclass
class DatasetDescription:
    metadata: Metadata
    composition: Composition | None = None
    provenance: Provenance | None = None
    social_concerns: SocialConcerns | None = None
    span: SourceSpan | None = _span_field()

    def instance(self, name: str) -> DataInstance | None:
        if self.composition is None:
            return None
        for inst in self.composition.instances:
            if inst.name == name:
                return inst
        return None

    def all_rules(self) -> list[ConsistencyRule]:
        if self.composition is None:
            return []
        return [rule for inst in self.composition.instances
                for rule in inst.consistency_rules]
