from .parser import parse, parse_lenient
from .printer import pretty_print
from .tree import Leaf, Node, SyntaxTree, iter_leaves, leaf_concat

__all__ = ["parse", "parse_lenient", "pretty_print", "SyntaxTree", "Node",
           "Leaf", "iter_leaves", "leaf_concat"]
