"""Completeness reporting, structural diff, and declared-vs-actual checks."""

from __future__ import annotations

import copy
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from datadesc import (analyze_source, check_statistics, compare,
                      completeness_report, load_table)
from datadesc.analysis import CHECKLIST_VERSION, SECTIONS
from datadesc.model.types import Composition
from datadesc.rules import SchemaMismatch

from generators import random_model

# ------------------------------------------------------------------ checklist


def test_checklist_has_22_items_in_4_sections(melanoma_model):
    report = completeness_report(melanoma_model)
    assert [s.section for s in report.sections] == list(SECTIONS)
    assert [s.expected for s in report.sections] == [9, 5, 6, 2]
    assert sum(s.expected for s in report.sections) == 22
    assert CHECKLIST_VERSION == 1


def test_melanoma_is_fully_documented(melanoma_model):
    report = completeness_report(melanoma_model)
    assert report.overall_pct == 100.0
    assert report.missing_items == []


def test_gender_coref_misses_attribute_statistics(corpus_models):
    report = completeness_report(corpus_models["gender_coref.ddesc"])
    assert report.missing_items == ["composition.attribute_statistics"]
    assert report.overall_pct == 95.45  # 21/22, half-up


def test_movie_reviews_misses_three_items(corpus_models):
    report = completeness_report(corpus_models["movie_reviews.ddesc"])
    assert report.missing_items == [
        "composition.attribute_statistics",
        "provenance.gathering.demographics",
        "provenance.labeling.requirements",
    ]
    assert report.overall_pct == 86.36  # 19/22


def test_metadata_only_description_scores_sparse_sections():
    model = analyze_source('Metadata:\n  Title: "T"\n  Version: v0001\n').model
    report = completeness_report(model)
    by_name = {s.section: s for s in report.sections}
    assert (by_name["Metadata"].filled, by_name["Metadata"].expected) == (2, 9)
    assert by_name["Composition"].filled == 0
    assert by_name["Provenance"].filled == 0
    assert by_name["SocialConcerns"].filled == 0
    assert report.overall_pct == 9.09  # 2/22
    assert "metadata.release_date" in by_name["Metadata"].missing_items


def test_report_json_shape(melanoma_model):
    d = completeness_report(melanoma_model).to_json_dict()
    assert d["checklist_version"] == 1
    assert d["overall_pct"] == 100.0
    assert [s["section"] for s in d["sections"]] == list(SECTIONS)
    assert all(set(s) == {"section", "filled", "expected", "missing_items"}
               for s in d["sections"])


# ----------------------------------------------------------------------- diff


def test_identical_models_have_no_differences(corpus_models):
    for model in corpus_models.values():
        report = compare(model, model)
        assert report.entries == []
        assert not report


def test_single_scalar_mutation_yields_one_changed_entry(melanoma_model):
    after = copy.deepcopy(melanoma_model)
    after.composition.instances[0].size = 99
    report = compare(melanoma_model, after)
    assert len(report.entries) == 1
    entry = report.entries[0]
    assert entry.path == "composition/skinImages/size"
    assert entry.kind == "Changed"
    assert (entry.before, entry.after) == (33126, 99)


def test_named_element_removal_and_addition(melanoma_model):
    smaller = copy.deepcopy(melanoma_model)
    del smaller.composition.instances[0].attributes[2]
    forward = compare(melanoma_model, smaller)
    assert [(e.path, e.kind) for e in forward.entries] == [
        ("composition/skinImages/attributes/ageGroup", "Removed")]
    backward = compare(smaller, melanoma_model)
    assert [(e.path, e.kind) for e in backward.entries] == [
        ("composition/skinImages/attributes/ageGroup", "Added")]


def test_named_list_reordering_is_not_a_change(melanoma_model):
    shuffled = copy.deepcopy(melanoma_model)
    attrs = shuffled.composition.instances[0].attributes
    attrs[:] = [attrs[1], attrs[2], attrs[0]]
    assert compare(melanoma_model, shuffled).entries == []


def test_scalar_list_reordering_is_a_change(melanoma_model):
    shuffled = copy.deepcopy(melanoma_model)
    shuffled.metadata.tags = list(reversed(shuffled.metadata.tags))
    report = compare(melanoma_model, shuffled)
    assert [(e.path, e.kind) for e in report.entries] == [
        ("metadata/tags", "Changed")]


def test_absent_section_equals_empty_section(melanoma_model):
    base = analyze_source('Metadata:\n  Title: "T"\n  Version: v0001\n').model
    with_empty = copy.deepcopy(base)
    with_empty.composition = Composition()
    assert compare(base, with_empty).entries == []


def test_diff_json_omits_irrelevant_sides(melanoma_model):
    after = copy.deepcopy(melanoma_model)
    del after.composition.instances[0].attributes[2]
    after.composition.instances[0].size = 1
    entries = compare(melanoma_model, after).to_json_dict()["entries"]
    by_kind = {e["kind"]: e for e in entries}
    assert "after" not in by_kind["Removed"]
    assert "before" in by_kind["Removed"]
    assert {"path", "kind", "before", "after"} == set(by_kind["Changed"])


def test_entries_are_sorted_by_path(melanoma_model):
    after = copy.deepcopy(melanoma_model)
    after.metadata.title = "Other"
    after.composition.instances[0].size = 1
    paths = [e.path for e in compare(melanoma_model, after).entries]
    assert paths == sorted(paths)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_random_model_self_diff_is_empty(seed):
    model = random_model(random.Random(seed))
    assert compare(model, model).entries == []


# ------------------------------------------------------- declared vs. actual


CHECK_SRC = """Metadata:
  Title: "T"
  Version: v0001
Composition:
  DataInstances:
    Instance: rows
      Attributes:
        Attribute: age
          OfType: Numerical
          Statistics:
            {stats}
"""


def checked(stats: str, csv: str) -> list:
    result = analyze_source(CHECK_SRC.format(stats=stats))
    assert result.model is not None, result.diagnostics
    return check_statistics(result.model, load_table(csv, name="rows"))


def test_declared_values_within_tolerance_pass():
    assert checked("Mean: 4.67\n            Completeness: 100%",
                   "age\n4\n4\n6\n") == []


def test_mean_drift_is_w030_with_both_values():
    diags = checked("Mean: 5.0", "age\n4\n4\n6\n")
    assert [d.code for d in diags] == ["W030"]
    assert "declared Mean 5" in diags[0].message
    assert "4.666666666666667" in diags[0].message
    assert "rows.age" in diags[0].message


def test_completeness_drift_is_w030():
    diags = checked("Completeness: 100%", "age\n1\n2\n3\n4\n5\n6\n7\n8\n9\n\"\"\n")
    assert [d.code for d in diags] == ["W030"]
    assert "declared Completeness 100" in diags[0].message
    assert "90" in diags[0].message


def test_half_point_completeness_slack_is_allowed():
    # 199 of 200 filled = 99.5%, inside the 0.5-point tolerance
    csv = "age\n" + "1\n" * 199 + '""\n'
    assert checked("Completeness: 100%", csv) == []


def test_mode_mismatch_is_exact():
    diags = checked("Mode: 40-50", "age\n50-60\n50-60\n40-50\n")
    assert [d.code for d in diags] == ["W030"]
    assert "'40-50'" in diags[0].message and "'50-60'" in diags[0].message


def test_median_std_and_sparsity_drift():
    stats = ("Median: 9.0\n            Standard-Deviation: 3.0\n"
             "            Sparsity: 2")
    diags = checked(stats, "age\n2\n4\n4\n4\n5\n5\n7\n9\n")
    labels = [d.message.split("declared ")[1].split(" ")[0] for d in diags]
    assert sorted(labels) == ["Median", "Sparsity", "Standard-Deviation"]
    assert all(d.code == "W030" for d in diags)


def test_distribution_share_drift():
    stats = ('Categorical-Distribution:\n              "a": 50%\n'
             '              "b": 50%')
    diags = checked(stats, "age\na\na\na\nb\n")
    assert len(diags) == 2
    assert all("distribution share" in d.message for d in diags)


def test_distribution_key_absent_from_data_is_reported():
    stats = 'Categorical-Distribution:\n              "zz": 10%'
    diags = checked(stats, "age\na\nb\n")
    assert [d.code for d in diags] == ["W030"]
    assert "'zz'" in diags[0].message and "None" in diags[0].message


def test_numeric_declaration_on_text_column_is_reported():
    diags = checked("Mean: 2.0", "age\nx\ny\n")
    assert [d.code for d in diags] == ["W030"]
    assert "None" in diags[0].message


def test_rule_violations_are_e032_with_row_pointer():
    src = CHECK_SRC.format(stats="Completeness: 100%") + \
        "  Consistency Rules:\n      Inv rows positive: age > 10.0\n"
    model = analyze_source(src).model
    diags = check_statistics(model, load_table("age\n11\n4\n4\n", name="rows"))
    assert [d.code for d in diags] == ["E032"]
    assert diags[0].message == (
        "consistency rule 'positive' violated by 2 of 3 rows (first at row 1)")


def test_holding_rule_yields_no_diagnostics():
    src = CHECK_SRC.format(stats="Completeness: 100%") + \
        "  Consistency Rules:\n      Inv rows positive: age > 3.0\n"
    model = analyze_source(src).model
    table = load_table("age\n11\n4\n4\n", name="rows")
    assert check_statistics(model, table) == []


def test_rule_referencing_undeclared_attribute_fails_at_build():
    # columns a rule can reference are always declared attributes, so the
    # column-presence check in check_statistics covers rules too
    src = CHECK_SRC.format(stats="Completeness: 100%") + \
        "  Consistency Rules:\n      Inv rows positive: weight > 3.0\n"
    result = analyze_source(src)
    assert result.model is None
    assert [d.code for d in result.diagnostics] == ["E030"]
    assert "weight" in result.diagnostics[0].message


def test_declared_attribute_missing_from_table_is_schema_mismatch():
    model = analyze_source(CHECK_SRC.format(stats="Mean: 1.0")).model
    with pytest.raises(SchemaMismatch) as err:
        check_statistics(model, load_table("height\n1\n", name="rows"))
    assert "age" in str(err.value)


def test_single_instance_matches_table_with_other_name():
    model = analyze_source(CHECK_SRC.format(stats="Mean: 1.0")).model
    assert check_statistics(model, load_table("age\n1\n", name="export")) == []


def test_unmatched_table_among_many_instances_is_schema_mismatch():
    src = CHECK_SRC.format(stats="Mean: 1.0") + (
        "    Instance: cols\n      Attributes:\n        Attribute: age\n")
    model = analyze_source(src).model
    with pytest.raises(SchemaMismatch):
        check_statistics(model, load_table("age\n1\n", name="export"))


def test_melanoma_against_matching_sample(melanoma_model):
    # 22/25 benignant = the declared 88% share; modal age group matches.
    # The declared rule `(ageGroup >= 0)` orders a text column against a
    # number, which strict evaluation counts against every row.
    csv = ("ImageId,benignant_malignant,ageGroup\n"
           + "".join(f"id{i},benignant,40-50\n" for i in range(22))
           + "id22,malignant,40-50\nid23,malignant,50-60\nid24,malignant,0-10\n")
    diags = check_statistics(melanoma_model, load_table(csv, name="skinImages"))
    assert [d.code for d in diags] == ["E032"]
    assert diags[0].message == (
        "consistency rule 'inv1' violated by 25 of 25 rows (first at row 0)")
