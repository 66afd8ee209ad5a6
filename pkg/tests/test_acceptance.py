"""Acceptance gate: one test per release criterion.

Run `pytest -v tests/test_acceptance.py` for a pass/fail line per
criterion. Tolerances are part of the contract and are asserted exactly
as stated; nothing here is allowed to loosen over time.
"""

from __future__ import annotations

import random
import subprocess
import sys
import time

from datadesc import (Registry, analyze_source, compare, completeness_report,
                      compute_pair_correlation, evaluate_rule, load_table,
                      parse_query, pretty_print, profile_attribute, to_html,
                      to_markdown, validate)
from datadesc.model.types import ConsistencyRule
from datadesc.tables import Column

from conftest import CORPUS_NAMES, FIXTURES, read_fixture
from generators import (naive_rule_check, naive_search, random_expr,
                        random_model, random_query_text, random_table)


def test_golden_fixture_values_and_runtime():
    """Reference document parses cleanly with the documented values."""
    source = read_fixture("melanoma.ddesc")
    started = time.perf_counter()
    result = analyze_source(source)
    elapsed = time.perf_counter() - started

    assert result.model is not None
    assert [d for d in result.diagnostics if d.severity.name == "ERROR"] == []

    model = result.model
    assert model.metadata.version == "v0001"
    instance = model.instance("skinImages")
    assert instance.size == 33126
    assert instance.attribute("ageGroup").statistics.mode == "40-50"
    assert instance.attribute("ImageId").statistics.completeness_pct == 100.0
    assert "skinImages.benignant_malignant" \
        in model.provenance.labeling[0].labels
    assert model.social_concerns.issues[0].issue_type.label == "Bias"
    assert elapsed < 1.0, f"analysis took {elapsed:.3f}s"
    print("PASS golden-fixture values, %.0f ms" % (elapsed * 1e3))


def test_corpus_parses_builds_validates():
    """All three documented datasets model cleanly; the movie-reviews
    report flags the gathering process as under-documented."""
    for name in CORPUS_NAMES:
        result = analyze_source(read_fixture(name))
        assert result.model is not None, name
        errors = [d for d in result.diagnostics if d.severity.name == "ERROR"]
        assert errors == [], name
        validate(result.model)  # must not raise

    reviews = analyze_source(read_fixture("movie_reviews.ddesc")).model
    missing = completeness_report(reviews).missing_items
    assert "provenance.gathering.demographics" in missing
    print("PASS corpus of", len(CORPUS_NAMES), "datasets")


def test_round_trip_100_of_100():
    """pretty_print -> parse -> build is the identity on valid models."""
    ok = 0
    for seed in range(100):
        model = random_model(random.Random(seed))
        result = analyze_source(pretty_print(model))
        assert result.model is not None, f"seed {seed}: {result.diagnostics}"
        assert result.model == model, f"seed {seed} round-trip mismatch"
        ok += 1
    assert ok == 100
    print("PASS round-trip 100/100")


def test_rule_engine_matches_naive_oracle_200_cases():
    """Strict per-row semantics agree with a naive interpreter."""
    rng = random.Random(20260401)
    agreements = 0
    for case in range(200):
        table = random_table(rng, max_rows=100)
        expr = random_expr(rng, [c.name for c in table.columns],
                           depth=rng.randint(0, 4))
        verdict = evaluate_rule(
            ConsistencyRule(name=f"case{case}", context="t", expr=expr),
            table)
        holds, violating, checked = naive_rule_check(expr, table)
        assert (verdict.holds, verdict.violating_rows,
                verdict.rows_checked) == (holds, violating, checked), \
            f"case {case} disagrees"
        agreements += 1
    assert agreements == 200
    print("PASS rule oracle 200/200")


def test_statistics_oracle():
    """Documented statistics fixtures at their stated tolerances."""
    stats = profile_attribute(
        Column("x", [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]))
    assert abs(stats.mean - 5.00) <= 1e-9
    assert abs(stats.std_dev - 2.00) <= 1e-9

    sparse = profile_attribute(Column("x", [0.0, 0.0, 5.0, 10.0]))
    assert sparse.completeness_pct == 100.0
    assert sparse.sparsity_count == 2

    r = compute_pair_correlation(Column("a", [1.0, 2.0, 3.0]),
                                 Column("b", [2.0, 4.0, 6.0]))
    assert r == 1.0
    print("PASS statistics oracle")


def test_diff_identity_and_single_mutation():
    """Self-comparison is empty; one mutated field is one Changed entry."""
    for name in CORPUS_NAMES:
        model = analyze_source(read_fixture(name)).model
        assert compare(model, model).entries == [], name

    base = analyze_source(read_fixture("melanoma.ddesc")).model
    mutated = analyze_source(
        read_fixture("melanoma.ddesc").replace("Size: 33126", "Size: 4")).model
    entries = compare(base, mutated).entries
    assert len(entries) == 1
    assert entries[0].kind == "Changed"
    assert entries[0].path == "composition/skinImages/size"
    print("PASS diff identity + mutation")


def test_search_documented_queries_and_oracle(tmp_path):
    """The documented queries return the documented sets, and 50 random
    queries agree with a brute-force scan of the corpus models."""
    registry = Registry(tmp_path / "reg")
    models = []
    for name in CORPUS_NAMES:
        model = analyze_source(read_fixture(name)).model
        models.append(model)
        registry.index_add(model)

    def hits(text: str) -> list[str]:
        return [m.dataset_id
                for m in registry.search(parse_query(text)).matches]

    assert hits("task=Image-classification") == [
        "2020-siim-isic-melanoma-classification-challenge-v0001"]
    assert hits("issue_type=Bias") == [
        "2020-siim-isic-melanoma-classification-challenge-v0001",
        "gender-inclusive-coreference-v0001"]
    assert hits("") == [
        "2020-siim-isic-melanoma-classification-challenge-v0001",
        "gender-inclusive-coreference-v0001",
        "movie-reviews-polarity-v0002"]

    rng = random.Random(7)
    for case in range(50):
        query = parse_query(random_query_text(rng, models))
        got = [(m.title, m.dataset_id)
               for m in registry.search(query).matches]
        assert got == naive_search(models, query), f"query case {case}"
    print("PASS search queries + 50-case oracle")


def test_docgen_is_deterministic_and_complete():
    """Byte-identical documents across independent runs; the HTML names
    every declared element of the reference dataset."""
    source = read_fixture("melanoma.ddesc")
    first = analyze_source(source).model
    second = analyze_source(source).model
    assert to_markdown(first) == to_markdown(second)
    html = to_html(first)
    assert html == to_html(second)

    names = [i.name for i in first.composition.instances]
    names += [a.name for i in first.composition.instances
              for a in i.attributes]
    names += [p.name for p in first.provenance.gathering]
    names += [p.name for p in first.provenance.labeling]
    names += [i.name for i in first.social_concerns.issues]
    for name in names:
        assert name in html, name
    print("PASS docgen determinism +", len(names), "named elements")


def test_cli_exit_codes_end_to_end(tmp_path):
    """0 on success, 1 on error diagnostics, 2 on usage errors —
    through the real process entry point."""

    def run(*argv: str) -> int:
        return subprocess.run([sys.executable, "-m", "datadesc", *argv],
                              capture_output=True, timeout=60).returncode

    assert run("check", str(FIXTURES / "melanoma.ddesc")) == 0

    broken = tmp_path / "broken.ddesc"
    broken.write_text("Metadata:\n  Title 5\n", encoding="utf-8")
    assert run("check", str(broken)) == 1

    assert run("check", str(tmp_path / "does-not-exist.ddesc")) == 2
    assert run("no-such-command") == 2
    print("PASS cli exit codes 0/1/2")
