"""Build a machine-translated corpus through a pluggable provider.

The pipeline consults a persistent JSONL cache before any provider call,
rate-limits requests (default 5/s), retries transient failures with
bounded exponential backoff (3 attempts: 0.5 s, 1 s, 2 s), and runs
batches with bounded parallelism (default 4 in flight). A failed item
becomes an error record; the batch keeps going.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .corpus import TranslationCorpus, Verse, VerseRef, clean_verse
from .errors import ProviderError, TransientProviderError, ValidationError
from .providers import _nfc

log = logging.getLogger(__name__)

_BACKOFF = (0.5, 1.0, 2.0)

DEFAULT_RATE_LIMIT = 5.0
DEFAULT_BATCH_SIZE = 25
DEFAULT_PARALLELISM = 4
DEFAULT_MAX_RETRIES = 3


@dataclass(frozen=True)
class TranslationRecord:
    """One source/translation pair; error is None exactly on success."""

    ref: VerseRef
    source_text: str
    translated_text: str
    provider_id: str
    retrieved_at: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and bool(self.translated_text)


class TranslationCache:
    """(provider_id, NFC source) -> translation, persisted as JSONL.

    Reads are lock-free on an immutable-after-load dict snapshot pattern;
    writes are serialized and appended to the file immediately.
    """

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._entries: dict[tuple[str, str], str] = {}
        self._lock = threading.Lock()
        if self._path is not None and self._path.is_file():
            with self._path.open(encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, start=1):
                    if not line.strip():
                        continue
                    try:
                        row = json.loads(line)
                    except json.JSONDecodeError as exc:
                        raise ValidationError(f"{self._path}:{lineno}: malformed cache line: {exc}") from exc
                    provider = row.get("provider")
                    source = row.get("source")
                    translation = row.get("translation")
                    if not isinstance(provider, str) or not isinstance(source, str) or not isinstance(translation, str):
                        raise ValidationError(f"{self._path}:{lineno}: cache rows need provider, source, translation")
                    self._entries[(provider, _nfc(source))] = translation

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, provider_id: str, source: str) -> str | None:
        return self._entries.get((provider_id, _nfc(source)))

    def put(self, provider_id: str, source: str, translation: str) -> None:
        key = (provider_id, _nfc(source))
        with self._lock:
            if self._entries.get(key) == translation:
                return
            self._entries[key] = translation
            if self._path is not None:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                row = {"provider": provider_id, "source": source, "translation": translation}
                with self._path.open("a", encoding="utf-8", newline="\n") as fh:
                    fh.write(json.dumps(row, ensure_ascii=False))
                    fh.write("\n")


class RateLimiter:
    """Reserves evenly spaced request slots; safe across threads."""

    def __init__(self, per_second: float, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if per_second <= 0:
            raise ValidationError(f"rate limit must be positive, got {per_second}")
        self._interval = 1.0 / per_second
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_slot = 0.0

    def wait(self) -> None:
        with self._lock:
            now = self._clock()
            slot = max(now, self._next_slot)
            self._next_slot = slot + self._interval
        delay = slot - now
        if delay > 0:
            self._sleep(delay)


def translate_batch(
    provider,
    sources: Sequence[tuple[VerseRef, str]],
    cache: TranslationCache | None = None,
    batch_size: int = DEFAULT_BATCH_SIZE,
    rate_limit: float = DEFAULT_RATE_LIMIT,
    max_retries: int = DEFAULT_MAX_RETRIES,
    parallelism: int = DEFAULT_PARALLELISM,
    sleep: Callable[[float], None] = time.sleep,
) -> list[TranslationRecord]:
    """Translate (ref, text) pairs in order: cache first, then batched calls.

    Transient provider failures are retried up to max_retries with the
    backoff schedule; anything still failing raises ProviderError. Per-item
    problems (empty source, no translation for an item) become error
    records and do not abort the batch.
    """
    if not sources:
        raise ValidationError("sources must be non-empty")
    if batch_size < 1:
        raise ValidationError(f"batch_size must be >= 1, got {batch_size}")
    if parallelism < 1:
        raise ValidationError(f"parallelism must be >= 1, got {parallelism}")
    if max_retries < 1:
        raise ValidationError(f"max_retries must be >= 1, got {max_retries}")

    provider_id = getattr(provider, "provider_id", provider.__class__.__name__)
    cache = cache if cache is not None else TranslationCache()
    limiter = RateLimiter(rate_limit, sleep=sleep)
    results: list[TranslationRecord | None] = [None] * len(sources)
    pending: list[int] = []

    def record(index: int, translation: str = "", error: str | None = None) -> None:
        ref, source = sources[index]
        results[index] = TranslationRecord(
            ref=ref,
            source_text=source,
            translated_text=translation,
            provider_id=provider_id,
            retrieved_at=time.time(),
            error=error,
        )

    for i, (ref, source) in enumerate(sources):
        if not source or not source.strip():
            record(i, error="empty source text")
            continue
        hit = cache.get(provider_id, source)
        if hit is not None:
            record(i, translation=hit)
            continue
        pending.append(i)

    def run_batch(indices: list[int]) -> None:
        texts = [sources[i][1] for i in indices]
        limiter.wait()
        last_exc: Exception | None = None
        for attempt in range(max_retries):
            try:
                translations = provider.translate(texts)
                break
            except TransientProviderError as exc:
                last_exc = exc
                if attempt + 1 < max_retries:
                    delay = _BACKOFF[min(attempt, len(_BACKOFF) - 1)]
                    log.warning("transient provider failure (attempt %d): %s", attempt + 1, exc)
                    sleep(delay)
        else:
            raise ProviderError(
                f"provider unreachable after {max_retries} attempts: {last_exc}"
            )
        if len(translations) != len(texts):
            raise ProviderError(
                f"provider returned {len(translations)} translations for {len(texts)} texts"
            )
        for index, translation in zip(indices, translations):
            if translation is None:
                record(index, error="no translation available")
            elif not translation:
                record(index, error="empty translation")
            else:
                cache.put(provider_id, sources[index][1], translation)
                record(index, translation=translation)

    batches = [pending[s : s + batch_size] for s in range(0, len(pending), batch_size)]
    if len(batches) <= 1 or parallelism == 1:
        for batch in batches:
            run_batch(batch)
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = [pool.submit(run_batch, batch) for batch in batches]
            for future in futures:
                future.result()

    return [r for r in results if r is not None]


def build_parallel_corpus(
    source: TranslationCorpus,
    provider,
    corpus_id: str,
    cache: TranslationCache | None = None,
    title: str | None = None,
    language: str = "en",
    **kwargs,
) -> TranslationCorpus:
    """Translate every verse of ``source``; failed verses are warned and omitted.

    Output refs are always a subset of the source refs. Each verse keeps the
    provider translation as raw text with the cleaned form derived from it.
    """
    if len(source) == 0:
        raise ValidationError(f"source corpus {source.id!r} is empty")
    sources = [(ref, source.verses[ref].clean_text) for ref in source.refs()]
    records = translate_batch(provider, sources, cache=cache, **kwargs)
    verses: dict[VerseRef, Verse] = {}
    for rec in records:
        if not rec.ok:
            log.warning("verse %s failed to translate: %s", rec.ref, rec.error)
            continue
        verses[rec.ref] = Verse(
            ref=rec.ref,
            raw_text=rec.translated_text,
            clean_text=clean_verse(rec.translated_text),
        )
    provider_id = getattr(provider, "provider_id", provider.__class__.__name__)
    return TranslationCorpus(
        id=corpus_id,
        title=title or f"Machine translation of {source.title}",
        translator=provider_id,
        language=language,
        verses=verses,
        source=f"translated from corpus {source.id!r} via {provider_id}",
    )
