"""Well-formedness checks over a built model.

Validation is pure: the same model always yields the same diagnostics.
Errors mark invariant violations (bad ranges, contradictory statistics);
warnings mark legal but suspicious content, e.g. a categorical
distribution that does not cover all categories. A full distribution
must sum to 100 within ±0.5 to absorb author-side rounding.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, SourceSpan, sort_diagnostics
from . import types as m

_POINT = SourceSpan(1, 1, 1, 1)


def _check_metadata(md: m.Metadata, out: list[Diagnostic]) -> None:
    span = md.span or _POINT
    if not md.title.strip():
        out.append(Diagnostic("E025", "dataset title is missing or empty", span))
    if not md.version.strip():
        out.append(Diagnostic("E025", "dataset version is missing or empty", span))
    seen: set[str] = set()
    for tag in md.tags:
        if tag in seen:
            out.append(Diagnostic("E026", f"duplicate tag '{tag}'", span))
        seen.add(tag)
    for funder in md.authoring.funders:
        if funder.grant_id and not funder.grantor:
            out.append(Diagnostic(
                "E024",
                f"funder '{funder.name}' has a grant id but no grantor",
                funder.span or span))


def _check_attr_statistics(attr: m.Attribute, inst: m.DataInstance,
                           out: list[Diagnostic]) -> None:
    stats = attr.statistics
    if stats is None:
        return
    span = stats.span or attr.span or _POINT
    where = f"attribute '{inst.name}.{attr.name}'"
    if stats.completeness_pct is not None \
            and not 0.0 <= stats.completeness_pct <= 100.0:
        out.append(Diagnostic(
            "E020", f"completeness of {where} must be within [0, 100], "
                    f"got {stats.completeness_pct:g}", span))
    dist = stats.categorical_distribution
    if dist is not None:
        for category, pct in dist.items():
            if not 0.0 <= pct <= 100.0:
                out.append(Diagnostic(
                    "E020", f"distribution entry \"{category}\" of {where} "
                            f"must be within [0, 100], got {pct:g}", span))
        total = sum(dist.values())
        if total > 100.5:
            out.append(Diagnostic(
                "E021", f"categorical distribution of {where} sums to "
                        f"{total:g} > 100", span))
        elif dist and total < 99.5:
            out.append(Diagnostic(
                "W020", f"categorical distribution of {where} sums to "
                        f"{total:g} < 100 (partial distribution)", span))
    if attr.attr_type is m.AttrType.CATEGORICAL:
        for label, value in (("Mean", stats.mean), ("Median", stats.median),
                             ("Standard-Deviation", stats.std_dev)):
            if value is not None:
                out.append(Diagnostic(
                    "E022", f"{label} declared on categorical {where}", span))
    if attr.attr_type is m.AttrType.NUMERICAL and dist is not None:
        out.append(Diagnostic(
            "E022", f"categorical distribution declared on numerical {where}",
            span))


def _check_instance(inst: m.DataInstance, out: list[Diagnostic]) -> None:
    span = inst.span or _POINT
    if not inst.attributes:
        out.append(Diagnostic(
            "W021", f"instance '{inst.name}' declares no attributes", span))
    for attr in inst.attributes:
        _check_attr_statistics(attr, inst, out)
    stats = inst.statistics
    if stats is None:
        return
    for corr in stats.pair_correlations:
        if corr.value is not None and not -1.0 <= corr.value <= 1.0:
            out.append(Diagnostic(
                "E023", f"pair correlation value {corr.value:g} of instance "
                        f"'{inst.name}' outside [-1, 1]",
                corr.span or span))
    completeness = stats.quality_metrics.get("Completeness")
    if completeness is not None and not 0.0 <= completeness <= 100.0:
        out.append(Diagnostic(
            "E020", f"quality metric Completeness of instance '{inst.name}' "
                    f"must be within [0, 100], got {completeness:g}", span))


def validate(model: m.DatasetDescription) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    _check_metadata(model.metadata, out)
    if model.composition:
        for inst in model.composition.instances:
            _check_instance(inst, out)
    return sort_diagnostics(out)
