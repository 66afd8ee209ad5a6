"""Keyword table for the dataset-description language.

Structure in this language is keyword-delimited rather than
indentation-based, so the scanner needs to recognise every keyword
phrase (some span several words, some carry a mandatory colon, a few
none at all). Matching is case-insensitive; canonical ids are the
stable names the parser and tree kinds use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

REQUIRED = "required"
OPTIONAL = "optional"
NONE = "none"

_WORD_GAP = r"[ \t]+"
_BOUNDARY = r"(?![A-Za-z0-9_-])"


@dataclass(frozen=True)
class Keyword:
    canon: str
    words: tuple[str, ...]
    colon: str = REQUIRED

    @property
    def surface(self) -> str:
        text = " ".join(self.words)
        return text + ":" if self.colon == REQUIRED else text

    def pattern(self) -> str:
        body = _WORD_GAP.join(re.escape(w) for w in self.words)
        if self.colon == REQUIRED:
            return body + r"[ \t]*:"
        if self.colon == OPTIONAL:
            return body + rf"(?:[ \t]*:|{_BOUNDARY})"
        return body + _BOUNDARY


def _kw(canon: str, *words: str, colon: str = REQUIRED) -> Keyword:
    return Keyword(canon, words, colon)


KEYWORDS: tuple[Keyword, ...] = (
    # sections
    _kw("Metadata", "metadata"),
    _kw("Composition", "composition"),
    _kw("DataProvenance", "data", "provenance"),
    _kw("SocialConcerns", "social", "concerns"),
    # metadata
    _kw("UniqueId", "uniqueid"),
    _kw("UniqueId", "unique", "id"),
    _kw("Title", "title"),
    _kw("Version", "version"),
    _kw("ReleaseDate", "release", "date"),
    _kw("Description", "description"),
    _kw("Purposes", "purposes"),
    _kw("Tasks", "tasks"),
    _kw("Gaps", "gaps"),
    _kw("Licenses", "licenses"),
    _kw("Tags", "tags"),
    _kw("Categories", "categories"),
    _kw("DistributionPolicies", "distribution", "policies"),
    _kw("Applications", "applications"),
    _kw("Recommended", "recommended"),
    _kw("NonRecommended", "non-recommended"),
    _kw("PastUses", "past", "uses"),
    _kw("Authoring", "authoring"),
    _kw("ContributionGuidelines", "contribution", "guidelines"),
    _kw("Authors", "authors"),
    _kw("Funders", "funders"),
    _kw("Maintainers", "maintainers"),
    _kw("MaintenancePolicies", "maintenance", "policies"),
    _kw("Name", "name", colon=NONE),
    _kw("FunderKind", "type", colon=OPTIONAL),
    _kw("Grantor", "grantor", colon=OPTIONAL),
    _kw("GrantId", "grantid"),
    _kw("Email", "email"),
    # composition
    _kw("Rationale", "rationale"),
    _kw("DataInstances", "datainstances"),
    _kw("Instance", "instance"),
    _kw("Type", "type"),
    _kw("Size", "size"),
    _kw("Attributes", "attributes"),
    _kw("Attribute", "attribute"),
    _kw("LabelingProcessRef", "labelling", "process"),
    _kw("LabelingProcessRef", "labeling", "process"),
    _kw("OfType", "oftype"),
    _kw("Statistics", "statistics"),
    _kw("Mode", "mode"),
    _kw("Mean", "mean"),
    _kw("Median", "median"),
    _kw("StdDev", "standard-deviation"),
    _kw("CategoricalDistribution", "categorical-distribution"),
    _kw("Completeness", "completeness"),
    _kw("Sparsity", "sparsity"),
    _kw("PairCorrelation", "pair", "correlation"),
    _kw("Between", "between", colon=NONE),
    _kw("AndWord", "and", colon=NONE),
    _kw("ExternalSource", "external", "source", colon=NONE),
    _kw("From", "from"),
    _kw("Value", "value"),
    _kw("QualityMetrics", "quality", "metrics"),
    _kw("ClassBalance", "class-balance"),
    _kw("NoisyLabels", "noisy-labels"),
    _kw("Outliers", "outliers"),
    _kw("ConsistencyRules", "consistency", "rules"),
    _kw("Inv", "inv", colon=NONE),
    # provenance
    _kw("CurationRationale", "curation", "rationale"),
    _kw("GatheringProcesses", "gathering", "processes"),
    _kw("LabelingProcesses", "labeling", "processes"),
    _kw("LabelingProcesses", "labelling", "processes"),
    _kw("Process", "process"),
    _kw("Source", "source"),
    _kw("Noise", "noise"),
    _kw("SocialIssues", "social", "issues"),
    _kw("ProcessDemographics", "process", "demographics"),
    _kw("Countries", "countries"),
    _kw("Labels", "labels"),
    _kw("LabelingTeam", "labeling", "team"),
    _kw("LabelingTeam", "labelling", "team"),
    _kw("TeamDemographics", "team", "demographics"),
    _kw("GatheringRequirements", "gathering", "requirements", colon=OPTIONAL),
    _kw("LabelingRequirements", "labeling", "requirements", colon=OPTIONAL),
    _kw("LabelingRequirements", "labelling", "requirements", colon=OPTIONAL),
    _kw("Requirements", "requirements", colon=OPTIONAL),
    _kw("Requirement", "requirement"),
    # social concerns
    _kw("SocialIssue", "social", "issue"),
    _kw("IssueType", "issuetype"),
    _kw("IssueType", "issue", "type"),
    _kw("RelatedAttributes", "related", "attributes"),
)

# Longest surface first so prefixes ("Social Issue:") never shadow longer
# phrases ("Social Issues:").
ORDERED_KEYWORDS: tuple[Keyword, ...] = tuple(
    sorted(KEYWORDS, key=lambda k: len(" ".join(k.words)), reverse=True))

COMPILED: tuple[tuple[Keyword, re.Pattern[str]], ...] = tuple(
    (kw, re.compile(kw.pattern(), re.IGNORECASE)) for kw in ORDERED_KEYWORDS)

SECTION_CANONS = ("Metadata", "Composition", "DataProvenance", "SocialConcerns")

# Canonical display surface per canon id (first declaration wins).
SURFACES: dict[str, str] = {}
for _k in KEYWORDS:
    SURFACES.setdefault(_k.canon, " ".join(
        w.capitalize() if w.islower() and _k.canon not in ("FunderKind", "AndWord") else w
        for w in _k.words) + (":" if _k.colon == REQUIRED else ""))

# Hand-tuned display surfaces where simple capitalisation is wrong.
SURFACES.update({
    "UniqueId": "UniqueId:",
    "ReleaseDate": "Release Date:",
    "DataProvenance": "Data Provenance:",
    "DataInstances": "DataInstances:",
    "LabelingProcessRef": "Labelling process:",
    "OfType": "OfType:",
    "StdDev": "Standard-Deviation:",
    "CategoricalDistribution": "Categorical-Distribution:",
    "ClassBalance": "Class-Balance:",
    "NoisyLabels": "Noisy-Labels:",
    "NonRecommended": "Non-recommended:",
    "GrantId": "GrantId:",
    "IssueType": "IssueType:",
    "FunderKind": "type",
    "AndWord": "and",
    "Between": "Between",
    "Inv": "Inv",
    "ExternalSource": "external source",
    "Name": "Name",
    "Grantor": "Grantor",
    "GatheringRequirements": "Gathering Requirements:",
    "LabelingRequirements": "Labeling Requirements:",
    "Requirements": "Requirements:",
})
