"""Rule expressions: parsing, typing, evaluation, and oracle properties."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from datadesc import evaluate_rule, typecheck_rule
from datadesc.model.types import Attribute, AttrType, ConsistencyRule, DataInstance
from datadesc.rules import (Arith, AttributeRef, BoolLit, Compare, Logic, Not,
                            NumberLit, SchemaMismatch, StringLit, expr_to_text,
                            parse_rule_expr, referenced_attributes)
from datadesc.tables import Column, Table

from generators import naive_rule_check, random_expr, random_table, typed_expr


def rule(text: str, name: str = "r") -> ConsistencyRule:
    expr, diags = parse_rule_expr(text)
    assert expr is not None, [d.message for d in diags]
    return ConsistencyRule(name=name, context="t", expr=expr)


def table(**cols) -> Table:
    return Table("t", [Column(k, list(v)) for k, v in cols.items()])


def instance(**types) -> DataInstance:
    type_map = {"num": AttrType.NUMERICAL, "str": AttrType.CATEGORICAL,
                None: None}
    return DataInstance(name="t", attributes=[
        Attribute(name=n, attr_type=type_map[t]) for n, t in types.items()])


# ------------------------------------------------------------------- parsing


def test_parse_simple_comparison():
    expr, diags = parse_rule_expr("(age >= 0)")
    assert diags == []
    assert expr == Compare(">=", AttributeRef("age"), NumberLit(0.0))


def test_precedence_layers():
    expr, _ = parse_rule_expr("a implies b or c and d = e + f * g")
    # implies binds loosest, then or, and, comparison, additive, multiplicative
    want = Logic("implies", AttributeRef("a"),
                 Logic("or", AttributeRef("b"),
                       Logic("and", AttributeRef("c"),
                             Compare("=", AttributeRef("d"),
                                     Arith("+", AttributeRef("e"),
                                           Arith("*", AttributeRef("f"),
                                                 AttributeRef("g")))))))
    assert expr == want


def test_implies_is_right_associative():
    expr, _ = parse_rule_expr("a implies b implies c")
    assert expr == Logic("implies", AttributeRef("a"),
                         Logic("implies", AttributeRef("b"),
                               AttributeRef("c")))


def test_not_binds_tighter_than_and():
    expr, _ = parse_rule_expr("not a and b")
    assert expr == Logic("and", Not(AttributeRef("a")), AttributeRef("b"))


def test_parentheses_override_precedence():
    expr, _ = parse_rule_expr("a and (b or c)")
    assert expr == Logic("and", AttributeRef("a"),
                         Logic("or", AttributeRef("b"), AttributeRef("c")))


def test_string_and_bool_literals():
    expr, _ = parse_rule_expr('(kind = "benign\\n") or false')
    assert expr == Logic("or",
                         Compare("=", AttributeRef("kind"),
                                 StringLit("benign\n")),
                         BoolLit(False))


def test_malformed_expression_is_e001():
    expr, diags = parse_rule_expr("(a >= )")
    assert expr is None
    assert [d.code for d in diags] == ["E001"]


def test_expression_spans_offset_by_location():
    expr, _ = parse_rule_expr("age >= 0", line=7, col=20)
    assert expr.left.span.start_line == 7
    assert expr.left.span.start_col == 20


def test_referenced_attributes_walks_the_tree():
    expr, _ = parse_rule_expr("a + b > 2 and not (c = \"x\")")
    assert referenced_attributes(expr) == {"a", "b", "c"}


@pytest.mark.parametrize("seed", range(25))
def test_to_text_reparses_to_an_equal_tree(seed):
    rng = random.Random(seed)
    attrs = {"n1": "num", "n2": "num", "s1": "str", "s2": "str"}
    expr = typed_expr(rng, attrs, depth=rng.randint(0, 4))
    text = expr_to_text(expr)
    back, diags = parse_rule_expr(text)
    assert diags == []
    assert back == expr


# --------------------------------------------------------------- typechecking


def test_ordering_against_number_on_categorical_is_e031():
    diags = typecheck_rule(rule("(ageGroup >= 0)"), instance(ageGroup="str"))
    assert [d.code for d in diags] == ["E031"]


def test_ordering_against_number_on_numerical_is_clean():
    assert typecheck_rule(rule("(ageGroup >= 0)"),
                          instance(ageGroup="num")) == []


def test_unknown_attribute_is_e030():
    diags = typecheck_rule(rule("(nonexistent > 1)"), instance(age="num"))
    assert [d.code for d in diags] == ["E030"]


def test_untyped_attribute_is_e031():
    diags = typecheck_rule(rule("(anything = 1)"),
                           instance(anything=None))
    assert [d.code for d in diags] == ["E031"]


def test_arithmetic_on_categorical_is_e031():
    diags = typecheck_rule(rule("(kind + 1 > 0)"), instance(kind="str"))
    assert [d.code for d in diags] == ["E031"]


def test_not_on_number_is_e031():
    diags = typecheck_rule(rule("not age"), instance(age="num"))
    assert [d.code for d in diags] == ["E031"]


def test_ordering_booleans_is_e031():
    diags = typecheck_rule(rule("(age > 0) < (age > 1)"), instance(age="num"))
    assert [d.code for d in diags] == ["E031"]


def test_equality_of_booleans_is_fine():
    assert typecheck_rule(rule("(age > 0) = true"), instance(age="num")) == []


def test_non_boolean_top_level_is_e031():
    diags = typecheck_rule(rule("age + 1"), instance(age="num"))
    assert [d.code for d in diags] == ["E031"]


def test_poisoned_subtrees_do_not_cascade():
    # the unknown name is reported once, not re-reported by each parent
    diags = typecheck_rule(rule("(ghost + 1) * 2 > 0"), instance(age="num"))
    assert [d.code for d in diags] == ["E030"]


# ---------------------------------------------------------------- evaluation


def test_documented_age_example():
    verdict = evaluate_rule(rule("(age >= 0)"), table(age=[30.0, -1.0, 12.0]))
    assert verdict.holds is False
    assert verdict.violating_rows == [1]
    assert verdict.rows_checked == 3


def test_empty_table_is_vacuously_true():
    verdict = evaluate_rule(rule("(age >= 0)"), table(age=[]))
    assert verdict.holds is True
    assert verdict.violating_rows == []
    assert verdict.rows_checked == 0


def test_reflexivity_without_missing_values():
    verdict = evaluate_rule(rule("(a = a)"), table(a=[1.0, "x", 3.5]))
    assert verdict.holds is True


def test_missing_value_violates_strictly():
    verdict = evaluate_rule(rule("(a >= 0) or true"), table(a=[1.0, None]))
    # the disjunction would hold, but strict semantics fail the row first
    assert verdict.violating_rows == [1]


def test_division_by_zero_violates():
    verdict = evaluate_rule(rule("(10 / a) > 0"), table(a=[2.0, 0.0, 5.0]))
    assert verdict.violating_rows == [1]


def test_mixed_type_ordering_violates():
    verdict = evaluate_rule(rule("(a > 1)"), table(a=[2.0, "high"]))
    assert verdict.violating_rows == [1]


def test_equality_across_types_is_false_not_an_error():
    # `=` across types is defined (False), so its negation certifies the row
    verdict = evaluate_rule(rule('not (a = "red")'), table(a=[1.0, "red"]))
    assert verdict.violating_rows == [1]


def test_connectives_do_not_short_circuit():
    verdict = evaluate_rule(rule("true or (1 / a > 0)"), table(a=[1.0, 0.0]))
    assert verdict.violating_rows == [1]


def test_schema_mismatch_for_missing_column():
    with pytest.raises(SchemaMismatch):
        evaluate_rule(rule("(ghost > 0)"), table(a=[1.0]))


# ----------------------------------------------------------------- properties


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_matches_naive_interpreter(seed):
    rng = random.Random(seed)
    t = random_table(rng, max_rows=60)
    expr = random_expr(rng, [c.name for c in t.columns], rng.randint(0, 4))
    verdict = evaluate_rule(ConsistencyRule("r", "t", expr), t)
    holds, rows, checked = naive_rule_check(expr, t)
    assert (verdict.holds, verdict.violating_rows, verdict.rows_checked) \
        == (holds, rows, checked)


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_verdict_invariants(seed):
    rng = random.Random(seed)
    t = random_table(rng, max_rows=60)
    expr = random_expr(rng, [c.name for c in t.columns], rng.randint(0, 4))
    verdict = evaluate_rule(ConsistencyRule("r", "t", expr), t)
    assert verdict.holds == (verdict.violating_rows == [])
    assert verdict.violating_rows == sorted(set(verdict.violating_rows))
    assert all(0 <= i < verdict.rows_checked for i in verdict.violating_rows)
    assert verdict.rows_checked == t.row_count


def _append_row(t: Table, row: dict[str, object]) -> Table:
    return Table(t.name, [Column(c.name, list(c.cells) + [row[c.name]])
                          for c in t.columns])


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_appending_rows_is_monotone(seed):
    rng = random.Random(seed)
    t = random_table(rng, max_rows=30)
    expr = random_expr(rng, [c.name for c in t.columns], rng.randint(0, 3))
    r = ConsistencyRule("r", "t", expr)
    before = evaluate_rule(r, t)

    candidate = {c.name: rng.choice([1.0, 0.0, "red", None]) for c in t.columns}
    probe = Table(t.name, [Column(c.name, [candidate[c.name]])
                           for c in t.columns])
    row_satisfies = evaluate_rule(r, probe).holds

    after = evaluate_rule(r, _append_row(t, candidate))
    if row_satisfies:
        assert after.violating_rows == before.violating_rows
    else:
        assert after.violating_rows == before.violating_rows + [t.row_count]
    assert after.rows_checked == before.rows_checked + 1


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_de_morgan_per_row(seed):
    rng = random.Random(seed)
    t = random_table(rng, max_rows=40)
    names = [c.name for c in t.columns]
    p = random_expr(rng, names, rng.randint(0, 2))
    q = random_expr(rng, names, rng.randint(0, 2))
    neg_conj = evaluate_rule(ConsistencyRule("r", "t", Not(Logic("and", p, q))), t)
    disj_neg = evaluate_rule(ConsistencyRule("r", "t",
                                             Logic("or", Not(p), Not(q))), t)
    assert neg_conj.violating_rows == disj_neg.violating_rows
    assert neg_conj.holds == disj_neg.holds
