"""Multi-label sentiment: thresholding, Jaccard agreement, aggregation.

Verses carry independent sigmoid probabilities over ten labels (fixed
canonical order); a label set is the probabilities thresholded at tau,
boundary inclusive. Two empty label sets count as perfect agreement
(Jaccard 1.0) so "no sentiment" on both sides is not a 0/0 hole; a flag
on chapter_jaccard skips those verses instead.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import TranslationCorpus, VerseRef
from .errors import ValidationError

log = logging.getLogger(__name__)

CANONICAL_LABELS: tuple[str, ...] = (
    "optimistic",
    "thankful",
    "empathetic",
    "pessimistic",
    "anxious",
    "sad",
    "annoyed",
    "denial",
    "surprise",
    "joking",
)
LABEL_INDEX = {label: i for i, label in enumerate(CANONICAL_LABELS)}
N_LABELS = len(CANONICAL_LABELS)


def _check_probabilities(values: Sequence[float]) -> tuple[float, ...]:
    if len(values) != N_LABELS:
        raise ValidationError(f"expected {N_LABELS} probabilities, got {len(values)}")
    for i, p in enumerate(values):
        if not isinstance(p, (int, float)) or math.isnan(p) or p < 0.0 or p > 1.0:
            raise ValidationError(f"probability for {CANONICAL_LABELS[i]!r} out of [0,1]: {p!r}")
    return tuple(float(p) for p in values)


def _check_threshold(threshold: float) -> float:
    if not (0.0 < threshold < 1.0):
        raise ValidationError(f"threshold must be in (0,1), got {threshold}")
    return float(threshold)


def binarize(probabilities: Sequence[float], threshold: float) -> frozenset[str]:
    """Labels whose probability is >= threshold (boundary inclusive)."""
    probs = _check_probabilities(probabilities)
    tau = _check_threshold(threshold)
    return frozenset(CANONICAL_LABELS[i] for i, p in enumerate(probs) if p >= tau)


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """|a n b| / |a u b|; both empty -> 1.0 by convention."""
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


@dataclass(frozen=True)
class VersePrediction:
    probabilities: tuple[float, ...]
    labels: frozenset[str]


@dataclass(frozen=True)
class SentimentPredictions:
    """Per-verse probabilities and label sets for one corpus at one threshold."""

    corpus_id: str
    threshold: float
    per_verse: dict[VerseRef, VersePrediction]

    def refs(self) -> list[VerseRef]:
        return sorted(self.per_verse)

    def chapters(self) -> list[int]:
        return sorted({ref.chapter for ref in self.per_verse})


def chapter_jaccard(
    a: SentimentPredictions,
    b: SentimentPredictions,
    chapter: int,
    skip_both_empty: bool = False,
) -> float:
    """Mean per-verse Jaccard over the refs both predictions share in a chapter."""
    common = [
        ref for ref in sorted(set(a.per_verse) & set(b.per_verse)) if ref.chapter == chapter
    ]
    if skip_both_empty:
        common = [
            ref for ref in common if a.per_verse[ref].labels or b.per_verse[ref].labels
        ]
    if not common:
        raise ValidationError(
            f"no common verses in chapter {chapter} for {a.corpus_id} vs {b.corpus_id}"
        )
    scores = [jaccard(a.per_verse[ref].labels, b.per_verse[ref].labels) for ref in common]
    return math.fsum(scores) / len(scores)


def cumulative_counts(preds: SentimentPredictions, chapter: int | None = None) -> dict[str, int]:
    """Verse count per label over the corpus (or one chapter), canonical order."""
    counts = {label: 0 for label in CANONICAL_LABELS}
    for ref, pred in preds.per_verse.items():
        if chapter is not None and ref.chapter != chapter:
            continue
        for label in pred.labels:
            counts[label] += 1
    return counts


def cooccurrence(preds: SentimentPredictions) -> list[list[int]]:
    """10x10 symmetric matrix; (i,j) = verses carrying both labels, diagonal = label count."""
    matrix = [[0] * N_LABELS for _ in range(N_LABELS)]
    for pred in preds.per_verse.values():
        idx = sorted(LABEL_INDEX[label] for label in pred.labels)
        for pos, i in enumerate(idx):
            matrix[i][i] += 1
            for j in idx[pos + 1 :]:
                matrix[i][j] += 1
                matrix[j][i] += 1
    return matrix


def predict_corpus(provider, corpus: TranslationCorpus, threshold: float = 0.5) -> SentimentPredictions:
    """One thresholded probability row per verse, via the provider (batched inside)."""
    tau = _check_threshold(threshold)
    refs = corpus.refs()
    texts = [corpus.verses[ref].clean_text for ref in refs]
    rows = provider.predict(texts)
    if len(rows) != len(texts):
        raise ValidationError(f"provider returned {len(rows)} rows for {len(texts)} texts")
    per_verse: dict[VerseRef, VersePrediction] = {}
    for ref, row in zip(refs, rows):
        probs = _check_probabilities(row)
        per_verse[ref] = VersePrediction(probs, binarize(probs, tau))
    return SentimentPredictions(corpus_id=corpus.id, threshold=tau, per_verse=per_verse)


def save_predictions(preds: SentimentPredictions, path: str | Path) -> Path:
    """JSONL: header {corpus_id, threshold, label_order}, then one row per verse."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "corpus_id": preds.corpus_id,
        "threshold": preds.threshold,
        "label_order": list(CANONICAL_LABELS),
    }
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(header, ensure_ascii=False))
        fh.write("\n")
        for ref in preds.refs():
            pred = preds.per_verse[ref]
            row = {
                "chapter": ref.chapter,
                "verse": ref.verse,
                "probabilities": list(pred.probabilities),
                "labels": [label for label in CANONICAL_LABELS if label in pred.labels],
            }
            fh.write(json.dumps(row, ensure_ascii=False))
            fh.write("\n")
    return path


def load_predictions(path: str | Path) -> SentimentPredictions:
    """Read a predictions file; every row is re-validated against its header."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        lines = [line for line in fh if line.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty predictions file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:1: malformed header: {exc}") from exc
    if header.get("label_order") != list(CANONICAL_LABELS):
        raise ValidationError(f"{path}: label_order does not match the canonical vocabulary")
    corpus_id = header.get("corpus_id")
    if not isinstance(corpus_id, str) or not corpus_id:
        raise ValidationError(f"{path}: header missing corpus_id")
    tau = _check_threshold(header.get("threshold", -1.0))

    per_verse: dict[VerseRef, VersePrediction] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}:{lineno}: malformed JSONL line: {exc}") from exc
        try:
            ref = VerseRef(row["chapter"], row["verse"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"{path}:{lineno}: bad verse reference: {exc}") from exc
        if ref in per_verse:
            raise ValidationError(f"{path}:{lineno}: duplicate verse reference {ref}")
        try:
            probs = _check_probabilities(row.get("probabilities", ()))
        except ValidationError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
        stored = frozenset(row.get("labels", ()))
        expected = binarize(probs, tau)
        if stored != expected:
            raise ValidationError(
                f"{path}:{lineno}: stored labels for {ref} do not equal "
                f"binarize(probabilities, {tau})"
            )
        per_verse[ref] = VersePrediction(probs, expected)
    return SentimentPredictions(corpus_id=corpus_id, threshold=tau, per_verse=per_verse)
