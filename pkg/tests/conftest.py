from __future__ import annotations

import glob
import os

import pytest

from lexgram import pipeline
from lexgram.lexicon import build_index

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(REPO, "fixtures")


def fixture_path(*parts: str) -> str:
    return os.path.join(FIXTURES, *parts)


@pytest.fixture(scope="session")
def run_config():
    return pipeline.parse_config(fixture_path("run.cfg"))


@pytest.fixture(scope="session")
def entries(run_config):
    return pipeline.build_entries(run_config)


@pytest.fixture(scope="session")
def index(entries):
    return build_index(entries)


@pytest.fixture(scope="session")
def corpus_docs(run_config):
    return pipeline.load_corpus(run_config)


@pytest.fixture(scope="session")
def tagged_docs(run_config, corpus_docs, index):
    return pipeline.tag_corpus(corpus_docs, index, run_config.case_policy)


@pytest.fixture(scope="session")
def grammars(run_config):
    return pipeline.load_grammars(run_config)


@pytest.fixture(scope="session")
def all_grammar_files():
    return sorted(glob.glob(fixture_path("grammars", "*.grm"))
                  + glob.glob(fixture_path("grammars", "extra", "*.grm")))
