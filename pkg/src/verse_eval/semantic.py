"""Embedding-based comparison: cosine similarity, chapter statistics,
extreme-verse retrieval, and MMR keyword extraction.

All arithmetic is plain Python over math.fsum so results do not depend
on a BLAS build; report artifacts derived from these numbers must hash
identically across platforms.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .corpus import TranslationCorpus, VerseRef, clean_verse
from .errors import ValidationError
from .textstats import default_stoplist, remove_stopwords, tokenize

log = logging.getLogger(__name__)

_SCORE_SLACK = 1e-9

Vector = Sequence[float]


def cosine(u: Vector, v: Vector) -> float:
    """(u . v) / (||u|| ||v||). Rejects dimension mismatch and zero vectors."""
    if len(u) != len(v):
        raise ValidationError(f"dimension mismatch: {len(u)} vs {len(v)}")
    dot = math.fsum(x * y for x, y in zip(u, v))
    nu = math.sqrt(math.fsum(x * x for x in u))
    nv = math.sqrt(math.fsum(y * y for y in v))
    if nu == 0.0 or nv == 0.0:
        raise ValidationError("cosine of a zero vector is undefined")
    return dot / (nu * nv)


@dataclass(frozen=True)
class EmbeddingSet:
    """Uniform-dimension vectors for one corpus, keyed by verse reference."""

    corpus_id: str
    model_id: str
    dim: int
    per_verse: dict[VerseRef, tuple[float, ...]]

    def refs(self) -> list[VerseRef]:
        return sorted(self.per_verse)


@dataclass(frozen=True)
class SimilarityRecord:
    ref: VerseRef
    score: float
    pair: tuple[str, str]

    def __post_init__(self) -> None:
        if abs(self.score) > 1.0 + _SCORE_SLACK:
            raise ValidationError(f"similarity score out of [-1,1]: {self.score}")


@dataclass(frozen=True)
class ChapterStats:
    chapter: int
    mean: float
    std: float
    n: int


def verse_similarities(a: EmbeddingSet, b: EmbeddingSet) -> list[SimilarityRecord]:
    """Cosine for every ref present in both sets, sorted by ref."""
    if a.dim != b.dim:
        raise ValidationError(f"embedding dimension mismatch: {a.dim} vs {b.dim}")
    refs_a = set(a.per_verse)
    refs_b = set(b.per_verse)
    for ref in sorted(refs_a ^ refs_b):
        owner = a.corpus_id if ref in refs_a else b.corpus_id
        log.warning("verse %s has an embedding only in %s; skipped", ref, owner)
    pair = (a.corpus_id, b.corpus_id)
    return [
        SimilarityRecord(ref=ref, score=cosine(a.per_verse[ref], b.per_verse[ref]), pair=pair)
        for ref in sorted(refs_a & refs_b)
    ]


def _mean_std(scores: Sequence[float]) -> tuple[float, float]:
    n = len(scores)
    mean = math.fsum(scores) / n
    variance = math.fsum((s - mean) ** 2 for s in scores) / n
    return mean, math.sqrt(variance)


def chapter_stats(records: Sequence[SimilarityRecord], chapter: int) -> ChapterStats:
    """Arithmetic mean and population (divide-by-n) std of one chapter's scores."""
    scores = [r.score for r in records if r.ref.chapter == chapter]
    if not scores:
        raise ValidationError(f"no similarity records in chapter {chapter}")
    mean, std = _mean_std(scores)
    return ChapterStats(chapter=chapter, mean=mean, std=std, n=len(scores))


def all_chapter_stats(records: Sequence[SimilarityRecord]) -> list[ChapterStats]:
    chapters = sorted({r.ref.chapter for r in records})
    return [chapter_stats(records, ch) for ch in chapters]


def pooled_stats(records: Sequence[SimilarityRecord]) -> ChapterStats:
    """Mean/std over every record regardless of chapter (chapter field is 0)."""
    scores = [r.score for r in records]
    if not scores:
        raise ValidationError("no similarity records to pool")
    mean, std = _mean_std(scores)
    return ChapterStats(chapter=0, mean=mean, std=std, n=len(scores))


def extremes(records: Sequence[SimilarityRecord], k: int, direction: str) -> list[SimilarityRecord]:
    """Top-k by score ("most") or bottom-k ("least"); ties break by ref then pair."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if direction == "most":
        key = lambda r: (-r.score, r.ref, r.pair)
    elif direction == "least":
        key = lambda r: (r.score, r.ref, r.pair)
    else:
        raise ValidationError(f"direction must be 'most' or 'least', got {direction!r}")
    return sorted(records, key=key)[:k]


def mmr_select(
    relevance: Sequence[float],
    similarity: Sequence[Sequence[float]] | Callable[[int, int], float],
    k: int,
    lam: float,
) -> list[int]:
    """Greedy maximal-marginal-relevance selection over candidate indices.

    First pick is the relevance argmax; every later pick maximizes
    lam*rel(c) - (1-lam)*max(sim(c, s) for selected s). Ties go to the
    lowest index. ``similarity`` may be a full matrix or a callable.
    """
    if not (0.0 <= lam <= 1.0):
        raise ValidationError(f"lambda must be in [0,1], got {lam}")
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    n = len(relevance)
    if n == 0:
        return []
    sim = similarity if callable(similarity) else (lambda i, j: similarity[i][j])

    first = max(range(n), key=lambda i: (relevance[i], -i))
    selected = [first]
    chosen = {first}
    while len(selected) < min(k, n):
        best_i = -1
        best_score = -math.inf
        for i in range(n):
            if i in chosen:
                continue
            redundancy = max(sim(i, j) for j in selected)
            score = lam * relevance[i] - (1.0 - lam) * redundancy
            if score > best_score:
                best_i, best_score = i, score
        selected.append(best_i)
        chosen.add(best_i)
    return selected


def _candidate_phrases(
    tokens: Sequence[str], lo: int, hi: int, cap: int = 2000
) -> list[tuple[str, int]]:
    """Distinct n-grams in the range with document frequencies, capped by frequency."""
    freq: dict[str, int] = {}
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            phrase = " ".join(tokens[i : i + n])
            freq[phrase] = freq.get(phrase, 0) + 1
    ranked = sorted(freq.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:cap]


def mmr_keywords(
    document_text: str,
    provider,
    ngram_range: tuple[int, int] = (1, 3),
    k: int = 10,
    lam: float = 0.5,
    stoplist: frozenset[str] | set[str] | None = None,
) -> list[tuple[str, float]]:
    """Keyword phrases for a document, scored by cosine relevance, picked by MMR."""
    lo, hi = ngram_range
    if lo < 1 or hi < lo:
        raise ValidationError(f"bad ngram range: ({lo}, {hi})")
    stop = default_stoplist() if stoplist is None else stoplist
    cleaned = clean_verse(document_text)
    tokens = remove_stopwords(tokenize(cleaned), stop)
    if not tokens:
        raise ValidationError("document has no content tokens after cleaning")
    candidates = _candidate_phrases(tokens, lo, hi)
    phrases = [phrase for phrase, _ in candidates]

    vectors = provider.embed([cleaned] + phrases)
    if len(vectors) != len(phrases) + 1:
        raise ValidationError(
            f"provider returned {len(vectors)} vectors for {len(phrases) + 1} texts"
        )
    doc_vec = vectors[0]
    cand_vecs = vectors[1:]
    relevance = [cosine(vec, doc_vec) for vec in cand_vecs]

    sim_cache: dict[tuple[int, int], float] = {}

    def sim(i: int, j: int) -> float:
        key = (i, j) if i <= j else (j, i)
        if key not in sim_cache:
            sim_cache[key] = cosine(cand_vecs[i], cand_vecs[j])
        return sim_cache[key]

    picked = mmr_select(relevance, sim, k, lam)
    return [(phrases[i], relevance[i]) for i in picked]


def embed_corpus(provider, corpus: TranslationCorpus) -> EmbeddingSet:
    """One vector per verse via the provider; dimension must stay uniform."""
    refs = corpus.refs()
    texts = [corpus.verses[ref].clean_text for ref in refs]
    vectors = provider.embed(texts)
    if len(vectors) != len(texts):
        raise ValidationError(f"provider returned {len(vectors)} vectors for {len(texts)} texts")
    dim: int | None = None
    per_verse: dict[VerseRef, tuple[float, ...]] = {}
    for ref, vec in zip(refs, vectors):
        if dim is None:
            dim = len(vec)
            if dim == 0:
                raise ValidationError("provider returned an empty vector")
        elif len(vec) != dim:
            raise ValidationError(
                f"embedding dimension drift at {ref}: {len(vec)} after {dim}"
            )
        if any(not math.isfinite(x) for x in vec):
            raise ValidationError(f"non-finite embedding entry at {ref}")
        per_verse[ref] = tuple(float(x) for x in vec)
    return EmbeddingSet(
        corpus_id=corpus.id,
        model_id=getattr(provider, "model_id", "unknown"),
        dim=dim or 0,
        per_verse=per_verse,
    )


def save_embeddings(embeddings: EmbeddingSet, path: str | Path) -> Path:
    """JSONL: header {corpus_id, model_id, dim}, then one vector row per verse."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {"corpus_id": embeddings.corpus_id, "model_id": embeddings.model_id, "dim": embeddings.dim}
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(header, ensure_ascii=False))
        fh.write("\n")
        for ref in embeddings.refs():
            row = {"chapter": ref.chapter, "verse": ref.verse, "vector": list(embeddings.per_verse[ref])}
            fh.write(json.dumps(row, ensure_ascii=False))
            fh.write("\n")
    return path


def load_embeddings(path: str | Path) -> EmbeddingSet:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        lines = [line for line in fh if line.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty embeddings file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:1: malformed header: {exc}") from exc
    corpus_id = header.get("corpus_id")
    model_id = header.get("model_id")
    dim = header.get("dim")
    if not isinstance(corpus_id, str) or not isinstance(model_id, str) or not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"{path}: header must carry corpus_id, model_id, dim")
    per_verse: dict[VerseRef, tuple[float, ...]] = {}
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
        vec = row.get("vector")
        if not isinstance(vec, list) or len(vec) != dim:
            raise ValidationError(f"{path}:{lineno}: vector length does not match header dim {dim}")
        per_verse[ref] = tuple(float(x) for x in vec)
    return EmbeddingSet(corpus_id=corpus_id, model_id=model_id, dim=dim, per_verse=per_verse)
