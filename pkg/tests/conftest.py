"""Shared fixtures for the package test suite.

The acceptance-criteria terminal summary lives in the repository-root
conftest so it also covers the service suite.
"""

from __future__ import annotations

from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def mini_corpora():
    from verse_eval import load_corpus

    return {cid: load_corpus(DATA_DIR / "mini" / cid) for cid in ("GT", "Gandhi")}


@pytest.fixture(scope="session")
def restrict():
    """Callable building a sub-corpus with only the given chapters."""
    from verse_eval.corpus import TranslationCorpus

    def _restrict(corpus, chapters):
        wanted = set(chapters)
        verses = {r: v for r, v in corpus.verses.items() if r.chapter in wanted}
        return TranslationCorpus(
            corpus.id, corpus.title, corpus.translator, corpus.language, verses, corpus.source
        )

    return _restrict
