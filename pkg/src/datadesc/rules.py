"""Consistency-rule expressions: parsing, type checking, and evaluation.

The expression language is a small invariant subset: attribute names,
number/string/boolean literals, comparisons (=, <>, <, <=, >, >=),
arithmetic (+, -, *, /), and boolean connectives (and, or, implies, not).
Precedence, loosest to tightest: implies, or, and, comparison, additive,
multiplicative, not. An expression is implicitly universally quantified
over the rows of a table.

Evaluation is strict: a row with a missing value in any referenced
column violates the rule, as does a row whose evaluation divides by
zero or mixes types at runtime. Both operands of a connective are
always evaluated (no short-circuiting).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Union

from .diagnostics import POINT_SPAN, Diagnostic, SourceSpan
from .tables import Cell, Table

if TYPE_CHECKING:  # pragma: no cover - type hints only
    from .model.types import ConsistencyRule, DataInstance


# --------------------------------------------------------------------------
# expression nodes

RuleExpr = Union["AttributeRef", "NumberLit", "StringLit", "BoolLit",
                 "Compare", "Arith", "Logic", "Not"]

_SPAN = field(default=None, compare=False, repr=False)

COMPARE_OPS = ("=", "<>", "<", "<=", ">", ">=")
ARITH_OPS = ("+", "-", "*", "/")
LOGIC_OPS = ("and", "or", "implies")


@dataclass
class AttributeRef:
    name: str
    span: SourceSpan | None = _SPAN


@dataclass
class NumberLit:
    value: float
    span: SourceSpan | None = _SPAN


@dataclass
class StringLit:
    value: str
    span: SourceSpan | None = _SPAN


@dataclass
class BoolLit:
    value: bool
    span: SourceSpan | None = _SPAN


@dataclass
class Compare:
    op: str
    left: RuleExpr
    right: RuleExpr
    span: SourceSpan | None = _SPAN


@dataclass
class Arith:
    op: str
    left: RuleExpr
    right: RuleExpr
    span: SourceSpan | None = _SPAN


@dataclass
class Logic:
    op: str
    left: RuleExpr
    right: RuleExpr
    span: SourceSpan | None = _SPAN


@dataclass
class Not:
    operand: RuleExpr
    span: SourceSpan | None = _SPAN


def referenced_attributes(expr: RuleExpr) -> set[str]:
    out: set[str] = set()
    stack: list[RuleExpr] = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, AttributeRef):
            out.add(node.name)
        elif isinstance(node, (Compare, Arith, Logic)):
            stack.extend((node.left, node.right))
        elif isinstance(node, Not):
            stack.append(node.operand)
    return out


def expr_to_text(expr: RuleExpr) -> str:
    """Canonical, fully parenthesised rendering (reparses to an equal tree)."""
    if isinstance(expr, AttributeRef):
        return expr.name
    if isinstance(expr, NumberLit):
        v = expr.value
        return str(int(v)) if float(v).is_integer() and abs(v) < 1e15 else repr(float(v))
    if isinstance(expr, StringLit):
        return '"' + expr.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Not):
        return f"not {expr_to_text(expr.operand)}"
    if isinstance(expr, (Compare, Arith, Logic)):
        return f"({expr_to_text(expr.left)} {expr.op} {expr_to_text(expr.right)})"
    raise TypeError(f"not a rule expression: {expr!r}")


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<string>"(?:[^"\\\n]|\\.)*")
      | (?P<op><=|>=|<>|[=<>+\-*/()])
    """,
    re.VERBOSE,
)

_KEYWORD_OPS = {"and", "or", "implies", "not", "true", "false"}


@dataclass
class _Tok:
    kind: str  # number | ident | string | op | kw | eof
    text: str
    span: SourceSpan


class ExprSyntaxError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span


def _tokenize(text: str, line: int, col: int) -> Iterator[_Tok]:
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(line, col + pos, line, col + pos + 1)
            raise ExprSyntaxError(f"unexpected character {text[pos]!r} in rule expression", span)
        kind = m.lastgroup or ""
        tok_text = m.group()
        pos = m.end()
        if kind == "ws":
            continue
        span = SourceSpan(line, col + m.start(), line, col + pos)
        if kind == "ident" and tok_text.lower() in _KEYWORD_OPS:
            yield _Tok("kw", tok_text.lower(), span)
        else:
            yield _Tok(kind, tok_text, span)
    yield _Tok("eof", "", SourceSpan(line, col + len(text), line, col + len(text) + 1))


class _ExprParser:
    """Layered recursive descent: implies < or < and < compare < add < mul < not."""

    def __init__(self, tokens: list[_Tok]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> _Tok:
        return self.tokens[self.pos]

    def _advance(self) -> _Tok:
        tok = self.cur
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _expect_op(self, text: str) -> None:
        if self.cur.kind == "op" and self.cur.text == text:
            self._advance()
            return
        raise ExprSyntaxError(f"expected '{text}' in rule expression", self.cur.span)

    def parse(self) -> RuleExpr:
        expr = self.implies()
        if self.cur.kind != "eof":
            raise ExprSyntaxError(
                f"unexpected {self.cur.text!r} after rule expression", self.cur.span)
        return expr

    def implies(self) -> RuleExpr:
        left = self.disjunction()
        if self.cur.kind == "kw" and self.cur.text == "implies":
            self._advance()
            right = self.implies()  # right-associative
            return Logic("implies", left, right, span=_join(left.span, right.span))
        return left

    def disjunction(self) -> RuleExpr:
        left = self.conjunction()
        while self.cur.kind == "kw" and self.cur.text == "or":
            self._advance()
            right = self.conjunction()
            left = Logic("or", left, right, span=_join(left.span, right.span))
        return left

    def conjunction(self) -> RuleExpr:
        left = self.comparison()
        while self.cur.kind == "kw" and self.cur.text == "and":
            self._advance()
            right = self.comparison()
            left = Logic("and", left, right, span=_join(left.span, right.span))
        return left

    def comparison(self) -> RuleExpr:
        left = self.additive()
        if self.cur.kind == "op" and self.cur.text in COMPARE_OPS:
            op = self._advance().text
            right = self.additive()
            return Compare(op, left, right, span=_join(left.span, right.span))
        return left

    def additive(self) -> RuleExpr:
        left = self.multiplicative()
        while self.cur.kind == "op" and self.cur.text in ("+", "-"):
            op = self._advance().text
            right = self.multiplicative()
            left = Arith(op, left, right, span=_join(left.span, right.span))
        return left

    def multiplicative(self) -> RuleExpr:
        left = self.negation()
        while self.cur.kind == "op" and self.cur.text in ("*", "/"):
            op = self._advance().text
            right = self.negation()
            left = Arith(op, left, right, span=_join(left.span, right.span))
        return left

    def negation(self) -> RuleExpr:
        if self.cur.kind == "kw" and self.cur.text == "not":
            tok = self._advance()
            operand = self.negation()
            return Not(operand, span=_join(tok.span, operand.span))
        return self.primary()

    def primary(self) -> RuleExpr:
        tok = self.cur
        if tok.kind == "number":
            self._advance()
            return NumberLit(float(tok.text), span=tok.span)
        if tok.kind == "string":
            self._advance()
            return StringLit(_unescape(tok.text[1:-1]), span=tok.span)
        if tok.kind == "kw" and tok.text in ("true", "false"):
            self._advance()
            return BoolLit(tok.text == "true", span=tok.span)
        if tok.kind == "ident":
            self._advance()
            return AttributeRef(tok.text, span=tok.span)
        if tok.kind == "op" and tok.text == "(":
            self._advance()
            inner = self.implies()
            self._expect_op(")")
            return inner
        raise ExprSyntaxError(
            f"expected a value or '(' in rule expression, found {tok.text or 'end of line'!r}",
            tok.span)


def _join(a: SourceSpan | None, b: SourceSpan | None) -> SourceSpan | None:
    if a is None or b is None:
        return a or b
    return SourceSpan(a.start_line, a.start_col, b.end_line, b.end_col)


def _unescape(body: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append({"n": "\n", "t": "\t"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def parse_rule_expr(text: str, line: int = 1,
                    col: int = 1) -> tuple[RuleExpr | None, list[Diagnostic]]:
    """Parse expression text located at (line, col); E001 on malformed input."""
    try:
        tokens = list(_tokenize(text, line, col))
        expr = _ExprParser(tokens).parse()
        return expr, []
    except ExprSyntaxError as err:
        return None, [Diagnostic("E001", err.message, err.span)]


# --------------------------------------------------------------------------
# type checking

_NUMBER = "number"
_STRING = "string"
_BOOLEAN = "boolean"
_BAD = "error"  # poisoned; suppresses cascading reports


def _attr_value_type(attr: object) -> str | None:
    """Map a declared attribute type to the expression type it carries."""
    kind = getattr(attr, "attr_type", None)
    kind = getattr(kind, "value", kind)
    if kind == "Numerical":
        return _NUMBER
    if kind == "Categorical":
        return _STRING
    return None


def typecheck_rule(rule: "ConsistencyRule", instance: "DataInstance") -> list[Diagnostic]:
    """Check rule.expr against the instance's attribute declarations.

    Numerical attributes carry numbers, Categorical attributes carry
    strings. Returns E030 for unknown attributes and E031 for type
    mismatches; an empty list means the rule is well-typed (and boolean).
    """
    attr_types: dict[str, str | None] = {
        a.name: _attr_value_type(a) for a in instance.attributes
    }
    diags: list[Diagnostic] = []
    fallback = getattr(rule, "span", None) or POINT_SPAN

    def at(node: RuleExpr) -> SourceSpan:
        return node.span or fallback

    def check(node: RuleExpr) -> str:
        if isinstance(node, NumberLit):
            return _NUMBER
        if isinstance(node, StringLit):
            return _STRING
        if isinstance(node, BoolLit):
            return _BOOLEAN
        if isinstance(node, AttributeRef):
            if node.name not in attr_types:
                diags.append(Diagnostic(
                    "E030", f"unknown attribute '{node.name}' in rule for "
                            f"instance '{instance.name}'", at(node)))
                return _BAD
            declared = attr_types[node.name]
            if declared is None:
                diags.append(Diagnostic(
                    "E031", f"attribute '{node.name}' has no declared type; "
                            f"cannot type the rule", at(node)))
                return _BAD
            return declared
        if isinstance(node, Not):
            inner = check(node.operand)
            if inner not in (_BOOLEAN, _BAD):
                diags.append(Diagnostic(
                    "E031", f"'not' needs a boolean operand, found {inner}", at(node)))
                return _BAD
            return _BOOLEAN if inner == _BOOLEAN else _BAD
        if isinstance(node, Arith):
            lt, rt = check(node.left), check(node.right)
            if _BAD in (lt, rt):
                return _BAD
            if lt != _NUMBER or rt != _NUMBER:
                diags.append(Diagnostic(
                    "E031", f"'{node.op}' needs numbers, found {lt} and {rt}", at(node)))
                return _BAD
            return _NUMBER
        if isinstance(node, Logic):
            lt, rt = check(node.left), check(node.right)
            if _BAD in (lt, rt):
                return _BAD
            if lt != _BOOLEAN or rt != _BOOLEAN:
                diags.append(Diagnostic(
                    "E031", f"'{node.op}' needs booleans, found {lt} and {rt}", at(node)))
                return _BAD
            return _BOOLEAN
        if isinstance(node, Compare):
            lt, rt = check(node.left), check(node.right)
            if _BAD in (lt, rt):
                return _BAD
            if lt != rt:
                diags.append(Diagnostic(
                    "E031", f"cannot compare {lt} with {rt} using '{node.op}'", at(node)))
                return _BAD
            if node.op not in ("=", "<>") and lt == _BOOLEAN:
                diags.append(Diagnostic(
                    "E031", f"ordering '{node.op}' is not defined on booleans", at(node)))
                return _BAD
            return _BOOLEAN

        raise TypeError(f"not a rule expression: {node!r}")

    top = check(rule.expr)
    if top not in (_BOOLEAN, _BAD):
        diags.append(Diagnostic(
            "E031", f"rule expression must be boolean, found {top}", at(rule.expr)))
    return diags


# --------------------------------------------------------------------------
# evaluation

@dataclass(frozen=True)
class RuleVerdict:
    holds: bool
    violating_rows: list[int]  # 0-based, ascending
    rows_checked: int


class SchemaMismatch(Exception):
    """A referenced column is absent from the table."""


class _RowFailure(Exception):
    pass


def _eval(node: RuleExpr, row: dict[str, Cell]) -> float | str | bool:
    if isinstance(node, NumberLit):
        return node.value
    if isinstance(node, StringLit):
        return node.value
    if isinstance(node, BoolLit):
        return node.value
    if isinstance(node, AttributeRef):
        value = row[node.name]
        assert value is not None  # missing handled before evaluation
        return value
    if isinstance(node, Not):
        value = _eval(node.operand, row)
        if not isinstance(value, bool):
            raise _RowFailure("'not' on non-boolean")
        return not value
    if isinstance(node, Arith):
        left, right = _eval(node.left, row), _eval(node.right, row)
        if isinstance(left, bool) or isinstance(right, bool) \
                or not isinstance(left, float) or not isinstance(right, float):
            raise _RowFailure("arithmetic on non-numbers")
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right == 0.0:
            raise _RowFailure("division by zero")
        return left / right
    if isinstance(node, Logic):
        # Both sides always evaluated: a failing operand fails the row even
        # when the other operand would decide the connective.
        left, right = _eval(node.left, row), _eval(node.right, row)
        if not isinstance(left, bool) or not isinstance(right, bool):
            raise _RowFailure("connective on non-boolean")
        if node.op == "and":
            return left and right
        if node.op == "or":
            return left or right
        return (not left) or right  # implies
    if isinstance(node, Compare):
        left, right = _eval(node.left, row), _eval(node.right, row)
        if node.op == "=":
            return type(left) is type(right) and left == right
        if node.op == "<>":
            return not (type(left) is type(right) and left == right)
        if type(left) is not type(right) or isinstance(left, bool):
            raise _RowFailure("ordering on mixed or boolean operands")
        assert not isinstance(left, bool) and not isinstance(right, bool)
        if node.op == "<":
            return left < right
        if node.op == "<=":
            return left <= right
        if node.op == ">":
            return left > right
        return left >= right
    raise TypeError(f"not a rule expression: {node!r}")


def evaluate_rule(rule: "ConsistencyRule", table: Table) -> RuleVerdict:
    """Evaluate rule.expr on every row; the rule holds iff no row violates."""
    refs = sorted(referenced_attributes(rule.expr))
    columns = {col.name: col for col in table.columns}
    absent = [name for name in refs if name not in columns]
    if absent:
        raise SchemaMismatch(
            f"table '{table.name}' lacks column(s) {', '.join(absent)} "
            f"referenced by rule '{rule.name}'")

    violating: list[int] = []
    rows = table.row_count
    for i in range(rows):
        cells = {name: columns[name].cells[i] for name in refs}
        if any(v is None for v in cells.values()):
            violating.append(i)
            continue
        try:
            result = _eval(rule.expr, cells)
        except _RowFailure:
            violating.append(i)
            continue
        if not isinstance(result, bool):
            violating.append(i)  # non-boolean result cannot certify the row
        elif not result:
            violating.append(i)
    return RuleVerdict(holds=not violating, violating_rows=violating, rows_checked=rows)
