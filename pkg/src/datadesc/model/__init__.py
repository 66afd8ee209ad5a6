"""Semantic model of a dataset description.

`build_model` turns a syntax tree into the typed model, `validate`
checks the model invariants, `resolve` looks elements up by name, and
`serialize` renders the canonical JSON form.
"""

from .build import Analysis, analyze_source, build_model
from .resolve import Ambiguous, NotFound, resolve
from .serialize import model_to_json_dict
from .types import (
    Applications,
    Attribute,
    AttributeStatistics,
    Authoring,
    Composition,
    ConsistencyRule,
    Contributor,
    ContributorRole,
    DataInstance,
    DataSource,
    DatasetDescription,
    Demographics,
    DescriptionInfo,
    ExternalSourceRef,
    Funder,
    FunderType,
    GatheringProcess,
    InstanceStatistics,
    InstanceType,
    IssueType,
    LabelingProcess,
    Metadata,
    PairCorrelation,
    AttrType,
    Provenance,
    SocialConcerns,
    SocialIssue,
    Team,
    TeamType,
)
from .validate import validate

__all__ = [
    "Analysis",
    "analyze_source",
    "build_model",
    "validate",
    "resolve",
    "NotFound",
    "Ambiguous",
    "model_to_json_dict",
    "Applications",
    "Attribute",
    "AttributeStatistics",
    "AttrType",
    "Authoring",
    "Composition",
    "ConsistencyRule",
    "Contributor",
    "ContributorRole",
    "DataInstance",
    "DataSource",
    "DatasetDescription",
    "Demographics",
    "DescriptionInfo",
    "ExternalSourceRef",
    "Funder",
    "FunderType",
    "GatheringProcess",
    "InstanceStatistics",
    "InstanceType",
    "IssueType",
    "LabelingProcess",
    "Metadata",
    "PairCorrelation",
    "Provenance",
    "SocialConcerns",
    "SocialIssue",
    "Team",
    "TeamType",
]
