"""Parser, diagnostics, recovery, and printer round-trips."""

from __future__ import annotations

import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from datadesc import analyze_source, parse, parse_lenient, pretty_print
from datadesc.syntax import leaf_concat

from generators import random_model

MINIMAL = 'Metadata:\n  Title: "Tiny"\n  Version: v0001\n'


def codes(diags):
    return [d.code for d in diags]


def test_empty_document_points_at_start():
    tree, diags = parse("")
    assert tree is None
    assert len(diags) == 1
    d = diags[0]
    assert d.code == "E001"
    assert (d.span.start_line, d.span.start_col) == (1, 1)
    assert "expected 'Metadata:'" in d.message


def test_minimal_document_parses_clean():
    tree, diags = parse(MINIMAL)
    assert tree is not None
    assert diags == []


def test_parse_returns_tree_iff_no_errors():
    tree, diags = parse('Metadata:\n  Title: "x"\n  Version: v1\n  Bogus!\n')
    assert any(d.severity.value == "error" for d in diags)
    assert tree is None
    lenient_tree, lenient_diags = parse_lenient(
        'Metadata:\n  Title: "x"\n  Version: v1\n  Bogus!\n')
    assert lenient_tree is not None
    assert codes(lenient_diags) == codes(diags)


def test_unterminated_string_is_e002():
    _, diags = parse_lenient('Metadata:\n  Title: "oops\n  Version: v1\n')
    assert "E002" in codes(diags)


def test_malformed_date_is_e003():
    _, diags = parse_lenient(
        'Metadata:\n  Title: "t"\n  Version: v1\n  Release Date: 45-77-2020\n')
    assert "E003" in codes(diags)


def test_malformed_size_is_e003():
    src = ('Metadata:\n  Title: "t"\n  Version: v1\n'
           'Composition:\n  DataInstances:\n    Instance: x\n'
           '      Size: soon\n')
    _, diags = parse_lenient(src)
    assert "E003" in codes(diags)


def test_duplicate_section_reported_on_second_occurrence():
    src = 'Metadata:\n  Title: "t"\n  Version: v1\nMetadata:\n  Title: "u"\n'
    _, diags = parse_lenient(src)
    dup = [d for d in diags if d.code == "E001"]
    assert dup and dup[0].span.start_line == 4
    assert "duplicate section" in dup[0].message


def test_recovery_continues_after_bad_line():
    src = ('Metadata:\n  Title: "t"\n  Version: v1\n  ???\n'
           'Composition:\n  DataInstances:\n    Instance: rows\n'
           '      Size: 10\n')
    tree, diags = parse_lenient(src)
    assert diags  # the bad line is reported ...
    assert tree.root.child("Composition") is not None  # ... and parsing went on
    assert analyze_source(src).model is None  # errors still block the model


def _strip_comments(text: str) -> str:
    out = []
    for line in text.split("\n"):
        in_string = False
        i = 0
        while i < len(line):
            ch = line[i]
            if ch == '"' and (i == 0 or line[i - 1] != "\\"):
                in_string = not in_string
            if not in_string and line.startswith("//", i):
                line = line[:i]
                break
            i += 1
        out.append(line)
    return "\n".join(out)


def _squash(text: str) -> str:
    return "".join(_strip_comments(text).split())


def test_leaf_concat_reproduces_corpus_modulo_whitespace(corpus_sources):
    for name, source in corpus_sources.items():
        tree, diags = parse(source)
        assert tree is not None, (name, codes(diags))
        assert _squash(leaf_concat(tree)) == _squash(source), name


def test_corpus_round_trip_is_stable(corpus_sources):
    for name, source in corpus_sources.items():
        first = analyze_source(source)
        assert first.model is not None, name
        printed = pretty_print(first.model)
        second = analyze_source(printed)
        assert second.model is not None, (name, codes(second.diagnostics))
        assert second.model == first.model, name
        # printing the reparsed model changes nothing further
        assert pretty_print(second.model) == printed, name


def test_printer_escapes_awkward_strings():
    model = analyze_source(MINIMAL).model
    model.metadata.title = 'line\nbreak "quoted" back\\slash\ttab'
    printed = pretty_print(model)
    again = analyze_source(printed)
    assert again.model is not None
    assert again.model.metadata.title == model.metadata.title


@pytest.mark.parametrize("seed", [3, 17, 4242])
def test_random_model_round_trip(seed):
    model = random_model(random.Random(seed))
    result = analyze_source(pretty_print(model))
    assert result.diagnostics == []
    assert result.model == model


_FUZZ_ALPHABET = 'MetadataCompositionTitle: "vers\n\t%-.,0123456789xyz()<>=/\\\''


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet=_FUZZ_ALPHABET, max_size=200))
def test_diagnostic_spans_stay_inside_the_input(source):
    _, diags = parse_lenient(source)
    lines = source.split("\n")
    for d in diags:
        span = d.span
        assert 1 <= span.start_line <= span.end_line <= len(lines)
        assert span.start_col >= 1
        assert (span.start_line, span.start_col) <= (span.end_line, span.end_col)
        assert span.end_col <= len(lines[span.end_line - 1]) + 2


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet=_FUZZ_ALPHABET, max_size=120))
def test_parsing_is_pure(source):
    tree1, diags1 = parse_lenient(source)
    tree2, diags2 = parse_lenient(source)
    assert diags1 == diags2
    assert leaf_concat(tree1) == leaf_concat(tree2)


def test_comments_are_ignored():
    src = MINIMAL + "// trailing commentary\n"
    tree, diags = parse(src)
    assert diags == []
    assert "commentary" not in leaf_concat(tree)
