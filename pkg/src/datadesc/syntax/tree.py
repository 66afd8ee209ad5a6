"""Spanned syntax tree produced by the parser.

A tree is lossless up to whitespace and comments: concatenating the
leaf texts in order reproduces the accepted input tokens. Inner nodes
carry a kind tag (section, declaration, or the canonical keyword id of
a property) and their children; leaves carry the exact source text plus
a cooked value where one exists (numbers, dates, unescaped strings).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from ..diagnostics import SourceSpan

Child = Union["Node", "Leaf"]


@dataclass
class Leaf:
    kind: str  # Keyword | String | Ident | QualName | Int | Number | Percent | Date | Phrase | Expr | Punct
    text: str
    span: SourceSpan
    value: object = None


@dataclass
class Node:
    kind: str
    children: list[Child] = field(default_factory=list)
    span: SourceSpan = SourceSpan(1, 1, 1, 1)

    def finish(self) -> "Node":
        """Set the span to cover all children (call once fully built)."""
        if self.children:
            first, last = self.children[0].span, self.children[-1].span
            self.span = SourceSpan(first.start_line, first.start_col,
                                   last.end_line, last.end_col)
        return self

    # -- navigation helpers used by the model builder -------------------

    def child(self, kind: str) -> Child | None:
        for c in self.children:
            if c.kind == kind:
                return c
        return None

    def children_of(self, kind: str) -> list[Child]:
        return [c for c in self.children if c.kind == kind]

    def leaves(self, kind: str | None = None) -> list[Leaf]:
        return [l for l in iter_leaves(self) if kind is None or l.kind == kind]

    def value_leaves(self) -> list[Leaf]:
        """Direct leaf children that are not keywords or punctuation."""
        return [c for c in self.children
                if isinstance(c, Leaf) and c.kind not in ("Keyword", "Punct")]

    def first_value(self) -> Leaf | None:
        values = self.value_leaves()
        return values[0] if values else None


@dataclass
class SyntaxTree:
    root: Node


def iter_leaves(node: Child) -> Iterator[Leaf]:
    if isinstance(node, Leaf):
        yield node
        return
    for child in node.children:
        yield from iter_leaves(child)


def leaf_concat(tree: SyntaxTree) -> str:
    """All leaf texts joined by single spaces (for fidelity checks)."""
    return " ".join(l.text for l in iter_leaves(tree.root))
