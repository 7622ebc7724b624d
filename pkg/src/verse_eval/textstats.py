"""Tokenization, stopword filtering, and n-gram frequency tables.

N-grams never cross verse boundaries, counts are aggregated over the
whole corpus, and top-k ties break lexicographically so output order is
deterministic across runs and iteration orders.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from pathlib import Path

from .corpus import TranslationCorpus
from .errors import ValidationError

log = logging.getLogger(__name__)

# Word = letters/digits joined by internal apostrophes or hyphens.
# Underscore is excluded from \w on purpose.
_TOKEN = re.compile(r"[^\W_]+(?:['\-][^\W_]+)*")

_STOPWORDS_RESOURCE = ("data", "stopwords_en.txt")
_DEFAULT_STOPLIST: frozenset[str] | None = None

NGram = tuple[str, ...]


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; punctuation stripped, digit-only tokens dropped."""
    text = text.lower().replace("’", "'")
    return [t for t in _TOKEN.findall(text) if any(c.isalpha() for c in t)]


def remove_stopwords(tokens: list[str], stoplist: frozenset[str] | set[str]) -> list[str]:
    return [t for t in tokens if t not in stoplist]


def load_stoplist(path: str | Path) -> frozenset[str]:
    """One token per line; blank lines ignored."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(line.strip().lower() for line in lines if line.strip())


def default_stoplist() -> frozenset[str]:
    """The bundled English stopword list (cached after first load)."""
    global _DEFAULT_STOPLIST
    if _DEFAULT_STOPLIST is None:
        from importlib import resources

        text = resources.files("verse_eval").joinpath(*_STOPWORDS_RESOURCE).read_text(encoding="utf-8")
        _DEFAULT_STOPLIST = frozenset(line.strip() for line in text.splitlines() if line.strip())
    return _DEFAULT_STOPLIST


def _verse_tokens(corpus: TranslationCorpus, stoplist: frozenset[str] | set[str]) -> dict:
    return {ref: remove_stopwords(tokenize(corpus.verses[ref].clean_text), stoplist) for ref in corpus.refs()}


def _count_ngrams(tokens: list[str], n: int, counts: Counter) -> None:
    for i in range(len(tokens) - n + 1):
        counts[tuple(tokens[i : i + n])] += 1


def _ranked(counts: Counter, k: int) -> list[tuple[NGram, int]]:
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))[:k]


def top_ngrams(
    corpus: TranslationCorpus,
    n: int,
    k: int,
    stoplist: frozenset[str] | set[str] | None = None,
) -> list[tuple[NGram, int]]:
    """Top-k n-grams over all verses, descending by count, ties lexicographic.

    ``stoplist=None`` selects the bundled list; pass an empty set to keep
    stopwords.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    stop = default_stoplist() if stoplist is None else stoplist
    counts: Counter = Counter()
    for tokens in _verse_tokens(corpus, stop).values():
        _count_ngrams(tokens, n, counts)
    return _ranked(counts, k)


def sentiment_conditioned_ngrams(
    corpus: TranslationCorpus,
    preds,
    label: str,
    n: int,
    k: int,
    stoplist: frozenset[str] | set[str] | None = None,
) -> list[tuple[NGram, int]]:
    """top_ngrams restricted to verses whose predicted label set contains ``label``."""
    from .sentiment import CANONICAL_LABELS

    if label not in CANONICAL_LABELS:
        raise ValidationError(f"unknown sentiment label {label!r}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    stop = default_stoplist() if stoplist is None else stoplist
    counts: Counter = Counter()
    for ref in corpus.refs():
        pred = preds.per_verse.get(ref)
        if pred is None:
            log.warning("no sentiment prediction for verse %s; skipped", ref)
            continue
        if label not in pred.labels:
            continue
        tokens = remove_stopwords(tokenize(corpus.verses[ref].clean_text), stop)
        _count_ngrams(tokens, n, counts)
    return _ranked(counts, k)
