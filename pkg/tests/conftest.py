"""Shared fixtures: the description corpus under tests/fixtures."""

from __future__ import annotations

from pathlib import Path

import pytest

from datadesc import analyze_source

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_NAMES = ("melanoma.ddesc", "gender_coref.ddesc", "movie_reviews.ddesc")


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def build_fixture(name: str):
    analysis = analyze_source(read_fixture(name))
    assert analysis.model is not None, \
        [d.format_line(name) for d in analysis.diagnostics]
    return analysis.model


@pytest.fixture(scope="session")
def melanoma_source():
    return read_fixture("melanoma.ddesc")


@pytest.fixture(scope="session")
def melanoma_model():
    return build_fixture("melanoma.ddesc")


@pytest.fixture(scope="session")
def corpus_sources():
    return {name: read_fixture(name) for name in CORPUS_NAMES}


@pytest.fixture(scope="session")
def corpus_models():
    return {name: build_fixture(name) for name in CORPUS_NAMES}
