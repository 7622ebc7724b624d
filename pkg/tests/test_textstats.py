"""Tokenization, stopword handling, and n-gram counting."""

import random
from collections import Counter

import pytest

from verse_eval.corpus import TranslationCorpus, Verse, VerseRef
from verse_eval.errors import ValidationError
from verse_eval.sentiment import (
    CANONICAL_LABELS,
    SentimentPredictions,
    VersePrediction,
)
from verse_eval.textstats import (
    default_stoplist,
    load_stoplist,
    remove_stopwords,
    sentiment_conditioned_ngrams,
    tokenize,
    top_ngrams,
)


def corpus_of(texts, cid="c"):
    verses = {}
    for i, text in enumerate(texts, start=1):
        ref = VerseRef(1 + (i - 1) // 1000, ((i - 1) % 1000) + 1)
        verses[ref] = Verse.from_raw(ref, text)
    return TranslationCorpus(cid, cid, cid, "en", verses)


def test_tokenize_basic():
    assert tokenize("The mind's own stillness!") == ["the", "mind's", "own", "stillness"]


def test_tokenize_folds_curly_apostrophe():
    assert tokenize("mind’s") == ["mind's"]


def test_tokenize_drops_letterless_tokens():
    assert tokenize("42 2nd верно abc-def") == ["2nd", "верно", "abc-def"]


def test_remove_stopwords_preserves_order():
    tokens = ["the", "fruit", "of", "action", "alone"]
    assert remove_stopwords(tokens, frozenset({"the", "of"})) == ["fruit", "action", "alone"]


def test_default_stoplist_contents():
    stop = default_stoplist()
    assert {"the", "of", "and", "a", "o"} <= stop
    assert len(stop) > 100
    # these carry meaning in verse text and must survive filtering
    assert "without" not in stop
    assert "every" not in stop


def test_load_stoplist(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("alpha\n\n  beta \nAlpha\n", encoding="utf-8")
    assert load_stoplist(path) == frozenset({"alpha", "beta"})


def test_top_ngrams_validates():
    corpus = corpus_of(["alpha beta"])
    with pytest.raises(ValidationError):
        top_ngrams(corpus, 0, 5)
    with pytest.raises(ValidationError):
        top_ngrams(corpus, 2, 0)


def test_top_ngrams_respects_verse_boundaries():
    corpus = corpus_of(["alpha beta", "gamma delta"])
    got = top_ngrams(corpus, 2, 10, stoplist=frozenset())
    assert (("beta", "gamma"), 1) not in got
    assert set(got) == {(("alpha", "beta"), 1), (("gamma", "delta"), 1)}


def test_top_ngrams_ties_lexicographic():
    corpus = corpus_of(["beta alpha", "alpha beta", "beta alpha", "alpha beta"])
    got = top_ngrams(corpus, 2, 2, stoplist=frozenset())
    assert got == [(("alpha", "beta"), 2), (("beta", "alpha"), 2)]


def test_top_ngrams_filters_stopwords_by_default():
    corpus = corpus_of(["the fruit of the action", "the fruit of the action"])
    got = top_ngrams(corpus, 2, 3)
    assert got[0] == (("fruit", "action"), 2)
    assert all("the" not in gram for gram, _ in got)


def test_top_ngrams_oracle_random():
    # exhaustive sliding-window recount, including the tie order
    vocab = ["a", "b", "c", "d", "e"]
    rng = random.Random(77)
    for _ in range(120):
        texts = [
            " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 12)))
            for _ in range(rng.randint(1, 20))
        ]
        corpus = corpus_of([t for t in texts if t.strip()] or ["a"])
        n = rng.randint(1, 3)
        k = rng.randint(1, 8)
        counts = Counter()
        for verse in corpus:
            toks = verse.clean_text.split()
            for i in range(len(toks) - n + 1):
                counts[tuple(toks[i : i + n])] += 1
        want = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
        assert top_ngrams(corpus, n, k, stoplist=frozenset()) == want


def test_sentiment_conditioned_ngrams_filters_by_label():
    corpus = corpus_of(["fruit action fruit action", "sorrow grief sorrow grief"])
    refs = corpus.refs()
    per_verse = {
        refs[0]: VersePrediction(tuple([0.9] + [0.0] * 9), frozenset({"optimistic"})),
        refs[1]: VersePrediction(
            tuple([0.0] * 5 + [0.9] + [0.0] * 4), frozenset({"sad"})
        ),
    }
    preds = SentimentPredictions("c", 0.5, per_verse)
    got = sentiment_conditioned_ngrams(corpus, preds, "sad", 2, 5, stoplist=frozenset())
    assert (("sorrow", "grief"), 2) in got
    assert all("fruit" not in gram for gram, _ in got)


def test_sentiment_conditioned_ngrams_unknown_label():
    corpus = corpus_of(["alpha beta"])
    preds = SentimentPredictions("c", 0.5, {})
    with pytest.raises(ValidationError, match="label"):
        sentiment_conditioned_ngrams(corpus, preds, "cheerful", 2, 5)


def test_sentiment_conditioned_ngrams_warns_on_missing_ref(caplog):
    corpus = corpus_of(["sorrow grief", "sorrow grief"])
    refs = corpus.refs()
    per_verse = {
        refs[0]: VersePrediction(tuple([0.0] * 5 + [0.9] + [0.0] * 4), frozenset({"sad"}))
    }
    preds = SentimentPredictions("c", 0.5, per_verse)
    with caplog.at_level("WARNING"):
        got = sentiment_conditioned_ngrams(corpus, preds, "sad", 2, 5, stoplist=frozenset())
    assert got == [(("sorrow", "grief"), 1)]
    assert str(refs[1]) in caplog.text


def test_canonical_label_count():
    assert len(CANONICAL_LABELS) == 10
