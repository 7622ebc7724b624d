"""Provider contracts for embeddings, sentiment probabilities, and translation.

Three interchangeable kinds:

* mock: deterministic, offline, hash-derived; identical text gives the
  identical vector on every platform and run
* file: precomputed outputs keyed by exact NFC text
* http: client for the inference-service wire protocol, with batching,
  bounded retries on transport errors, and strict response validation
  (cardinality, dimension, label order)

Output order always matches input order. Translation retries live in
acquire.translate_batch; the http translation provider only classifies
failures as transient or not.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import requests

from .errors import ConfigError, ProviderError, TransientProviderError, ValidationError
from .sentiment import CANONICAL_LABELS
from .textstats import tokenize

_BACKOFF = (0.5, 1.0, 2.0)

MOCK_EMBED_DIM = 16


@dataclass
class ProviderConfig:
    """Which provider to build and how it talks to its backend."""

    kind: str
    endpoint: str | None = None
    file_path: str | Path | None = None
    batch_size: int = 25
    timeout: float = 30.0
    max_retries: int = 3
    max_in_flight: int = 4

    def __post_init__(self) -> None:
        if self.kind not in ("mock", "file", "http"):
            raise ConfigError(f"unknown provider kind {self.kind!r}")
        if self.kind == "http":
            if not self.endpoint:
                raise ConfigError("http provider requires an endpoint")
            if self.file_path is not None:
                raise ConfigError("http provider does not take a file_path")
        elif self.kind == "file":
            if not self.file_path:
                raise ConfigError("file provider requires a file_path")
            if self.endpoint is not None:
                raise ConfigError("file provider does not take an endpoint")
        else:
            if self.endpoint is not None or self.file_path is not None:
                raise ConfigError("mock provider takes neither endpoint nor file_path")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.timeout <= 0:
            raise ConfigError(f"timeout must be positive, got {self.timeout}")
        if self.max_retries < 1:
            raise ConfigError(f"max_retries must be >= 1, got {self.max_retries}")
        if self.max_in_flight < 1:
            raise ConfigError(f"max_in_flight must be >= 1, got {self.max_in_flight}")


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


class MockEmbeddingProvider:
    """16-dim vectors derived from sha256 of the NFC text; never the zero vector."""

    model_id = f"mock-embed-{MOCK_EMBED_DIM}"
    dim = MOCK_EMBED_DIM

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        return [self._vector(t) for t in texts]

    @staticmethod
    def _vector(text: str) -> list[float]:
        first = hashlib.sha256(_nfc(text).encode("utf-8")).digest()
        second = hashlib.sha256(first).digest()
        raw = first + second
        values = [
            int.from_bytes(raw[4 * i : 4 * i + 4], "big") / 2**31 - 1.0
            for i in range(MOCK_EMBED_DIM)
        ]
        if all(v == 0.0 for v in values):
            values[0] = 1.0
        return values


# Tiny lexicon so mock predictions are non-uniform and human-inspectable:
# a matching token lifts that label above the usual 0.5 threshold.
_MOCK_LEXICON: dict[str, frozenset[str]] = {
    "optimistic": frozenset({"hope", "hopeful", "rejoice", "attain", "bliss", "victory"}),
    "thankful": frozenset({"thankful", "grateful", "gratitude", "blessed"}),
    "empathetic": frozenset({"compassion", "mercy", "kindness", "gentle"}),
    "pessimistic": frozenset({"despair", "doom", "ruin", "hopeless"}),
    "anxious": frozenset({"fear", "afraid", "tremble", "dread"}),
    "sad": frozenset({"sorrow", "grief", "weep", "mourn"}),
    "annoyed": frozenset({"anger", "wrath", "rage", "fury"}),
    "denial": frozenset({"deny", "refuse", "never", "reject"}),
    "surprise": frozenset({"wonder", "marvel", "behold", "astonish"}),
    "joking": frozenset({"laugh", "jest", "play", "smile"}),
}


class MockSentimentProvider:
    """Hash-derived base probabilities in [0.05, 0.45], lifted by lexicon hits."""

    model_id = "mock-sentiment-10"

    def predict(self, texts: Sequence[str]) -> list[list[float]]:
        return [self._row(t) for t in texts]

    @staticmethod
    def _row(text: str) -> list[float]:
        norm = _nfc(text)
        digest = hashlib.sha256(norm.encode("utf-8")).digest()
        probs = [0.05 + 0.40 * (digest[i] / 255.0) for i in range(len(CANONICAL_LABELS))]
        tokens = set(tokenize(norm))
        for i, label in enumerate(CANONICAL_LABELS):
            if tokens & _MOCK_LEXICON[label]:
                probs[i] = min(0.95, probs[i] + 0.5)
        return probs


class MockTranslationProvider:
    """Echo provider: the "translation" is the source text."""

    provider_id = "mock-translate"

    def translate(self, texts: Sequence[str]) -> list[str | None]:
        return list(texts)


class ReplayTranslationProvider:
    """Replays a recorded fixture (cache-format JSONL) keyed by NFC source text.

    Texts absent from the fixture come back as None so the caller can mark
    a per-item error without aborting the batch.
    """

    def __init__(self, fixture_path: str | Path):
        path = Path(fixture_path)
        if not path.is_file():
            raise ProviderError(f"replay fixture not found: {path}")
        self.provider_id = f"replay:{path.stem}"
        self._mapping: dict[str, str] = {}
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ProviderError(f"{path}:{lineno}: malformed fixture line: {exc}") from exc
                source = row.get("source")
                translation = row.get("translation")
                if not isinstance(source, str) or not isinstance(translation, str):
                    raise ProviderError(f"{path}:{lineno}: fixture rows need source and translation")
                self._mapping[_nfc(source)] = translation

    def translate(self, texts: Sequence[str]) -> list[str | None]:
        return [self._mapping.get(_nfc(t)) for t in texts]


def write_embedding_store(
    path: str | Path,
    vectors_by_text: dict[str, Sequence[float]],
    model_id: str,
    dim: int,
    corpus_id: str = "",
) -> Path:
    """Text-keyed embedding store: the embedding-file header, rows {"text", "vector"}."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps({"corpus_id": corpus_id, "model_id": model_id, "dim": dim}, ensure_ascii=False))
        fh.write("\n")
        for text in sorted(vectors_by_text):
            fh.write(json.dumps({"text": text, "vector": list(vectors_by_text[text])}, ensure_ascii=False))
            fh.write("\n")
    return path


def write_sentiment_store(
    path: str | Path,
    probabilities_by_text: dict[str, Sequence[float]],
    corpus_id: str = "",
    threshold: float = 0.5,
) -> Path:
    """Text-keyed sentiment store: the predictions-file header, rows {"text", "probabilities"}."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {"corpus_id": corpus_id, "threshold": threshold, "label_order": list(CANONICAL_LABELS)}
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(header, ensure_ascii=False))
        fh.write("\n")
        for text in sorted(probabilities_by_text):
            fh.write(
                json.dumps({"text": text, "probabilities": list(probabilities_by_text[text])}, ensure_ascii=False)
            )
            fh.write("\n")
    return path


def _read_store(path: str | Path) -> tuple[dict, list[dict]]:
    path = Path(path)
    if not path.is_file():
        raise ProviderError(f"provider store not found: {path}")
    with path.open(encoding="utf-8") as fh:
        lines = [line for line in fh if line.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty provider store")
    try:
        header = json.loads(lines[0])
        rows = [json.loads(line) for line in lines[1:]]
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed store line: {exc}") from exc
    return header, rows


class FileEmbeddingProvider:
    """Serves precomputed vectors from a text-keyed store file."""

    def __init__(self, store_path: str | Path):
        self._path = Path(store_path)
        header, rows = _read_store(self._path)
        dim = header.get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise ValidationError(f"{self._path}: header dim must be a positive integer")
        self.dim = dim
        self.model_id = header.get("model_id") or "file-embed"
        self._vectors: dict[str, list[float]] = {}
        for row in rows:
            text = row.get("text")
            vector = row.get("vector")
            if not isinstance(text, str) or not isinstance(vector, list):
                raise ValidationError(f"{self._path}: store rows need text and vector")
            if len(vector) != dim:
                raise ValidationError(
                    f"{self._path}: vector length {len(vector)} does not match header dim {dim}"
                )
            self._vectors[_nfc(text)] = [float(x) for x in vector]

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        out = []
        for text in texts:
            vec = self._vectors.get(_nfc(text))
            if vec is None:
                raise ProviderError(f"no stored embedding for text: {text!r}")
            out.append(list(vec))
        return out


class FileSentimentProvider:
    """Serves precomputed probability rows from a text-keyed store file."""

    def __init__(self, store_path: str | Path):
        self._path = Path(store_path)
        header, rows = _read_store(self._path)
        if header.get("label_order") != list(CANONICAL_LABELS):
            raise ValidationError(f"{self._path}: label_order does not match the canonical vocabulary")
        self.model_id = "file-sentiment"
        self._rows: dict[str, list[float]] = {}
        for row in rows:
            text = row.get("text")
            probs = row.get("probabilities")
            if not isinstance(text, str) or not isinstance(probs, list):
                raise ValidationError(f"{self._path}: store rows need text and probabilities")
            if len(probs) != len(CANONICAL_LABELS):
                raise ValidationError(
                    f"{self._path}: probability row has {len(probs)} entries, expected {len(CANONICAL_LABELS)}"
                )
            self._rows[_nfc(text)] = [float(p) for p in probs]

    def predict(self, texts: Sequence[str]) -> list[list[float]]:
        out = []
        for text in texts:
            row = self._rows.get(_nfc(text))
            if row is None:
                raise ProviderError(f"no stored sentiment probabilities for text: {text!r}")
            out.append(list(row))
        return out


class _HttpBase:
    def __init__(self, config: ProviderConfig, session=None, sleep=time.sleep):
        if config.kind != "http":
            raise ConfigError(f"expected an http config, got kind {config.kind!r}")
        self._config = config
        self._session = session if session is not None else requests.Session()
        self._sleep = sleep
        self._gate = threading.BoundedSemaphore(config.max_in_flight)
        self._base = config.endpoint.rstrip("/")
        self._info: dict | None = None

    def _request(self, method: str, url: str, payload: dict | None = None) -> dict:
        last_exc: Exception | None = None
        for attempt in range(self._config.max_retries):
            try:
                with self._gate:
                    if method == "GET":
                        resp = self._session.get(url, timeout=self._config.timeout)
                    else:
                        resp = self._session.post(url, json=payload, timeout=self._config.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_exc = exc
                if attempt + 1 < self._config.max_retries:
                    self._sleep(_BACKOFF[min(attempt, len(_BACKOFF) - 1)])
                continue
            if resp.status_code != 200:
                raise ProviderError(f"{url} returned HTTP {resp.status_code}")
            try:
                return resp.json()
            except ValueError as exc:
                raise ProviderError(f"{url} returned invalid JSON: {exc}") from exc
        raise ProviderError(
            f"{url} unreachable after {self._config.max_retries} attempts: {last_exc}"
        )

    def service_info(self) -> dict:
        """Health document; fetched once and used to validate every later batch."""
        if self._info is None:
            data = self._request("GET", f"{self._base}/v1/health")
            if data.get("status") != "ok":
                raise ProviderError(f"service not healthy: {data!r}")
            info = data.get("info")
            if not isinstance(info, dict):
                raise ProviderError("health response carries no service info")
            self._info = info
        return self._info

    def _batches(self, texts: Sequence[str]):
        size = self._config.batch_size
        for start in range(0, len(texts), size):
            yield list(texts[start : start + size])


class HttpEmbeddingProvider(_HttpBase):
    """Client for POST /v1/embed."""

    @property
    def model_id(self) -> str:
        return self.service_info().get("embedding_model") or "http-embed"

    @property
    def dim(self) -> int:
        dim = self.service_info().get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise ProviderError(f"service reports a bad embedding dim: {dim!r}")
        return dim

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        dim = self.dim
        out: list[list[float]] = []
        for batch in self._batches(texts):
            data = self._request("POST", f"{self._base}/v1/embed", {"texts": batch})
            vectors = data.get("vectors")
            if not isinstance(vectors, list) or len(vectors) != len(batch):
                got = len(vectors) if isinstance(vectors, list) else "no"
                raise ProviderError(f"embed returned {got} vectors for {len(batch)} texts")
            declared = data.get("dim")
            if declared != dim:
                raise ProviderError(f"embed batch declares dim {declared!r}, health said {dim}")
            for vec in vectors:
                if not isinstance(vec, list) or len(vec) != dim:
                    raise ProviderError(f"embed vector length does not match dim {dim}")
            out.extend([float(x) for x in vec] for vec in vectors)
        return out


class HttpSentimentProvider(_HttpBase):
    """Client for POST /v1/sentiments; refuses any non-canonical label order."""

    model_id = "http-sentiment"

    def _check_labels(self, labels) -> None:
        if labels != list(CANONICAL_LABELS):
            raise ProviderError(
                "server label order does not match the canonical vocabulary; refusing to reindex"
            )

    def predict(self, texts: Sequence[str]) -> list[list[float]]:
        info = self.service_info()
        self._check_labels(info.get("label_order"))
        out: list[list[float]] = []
        for batch in self._batches(texts):
            data = self._request("POST", f"{self._base}/v1/sentiments", {"texts": batch})
            self._check_labels(data.get("labels"))
            rows = data.get("probabilities")
            if not isinstance(rows, list) or len(rows) != len(batch):
                got = len(rows) if isinstance(rows, list) else "no"
                raise ProviderError(f"sentiments returned {got} rows for {len(batch)} texts")
            for row in rows:
                if not isinstance(row, list) or len(row) != len(CANONICAL_LABELS):
                    raise ProviderError("sentiment row does not have one probability per label")
            out.extend([float(p) for p in row] for row in rows)
        return out


class HttpTranslationProvider:
    """Client for POST <endpoint>/translate. Transport failures are transient;
    acquire.translate_batch owns the retry/backoff policy."""

    def __init__(self, config: ProviderConfig, source_lang: str, target_lang: str, session=None):
        if config.kind != "http":
            raise ConfigError(f"expected an http config, got kind {config.kind!r}")
        self._config = config
        self._session = session if session is not None else requests.Session()
        self._base = config.endpoint.rstrip("/")
        self.source_lang = source_lang
        self.target_lang = target_lang
        self.provider_id = f"http:{self._base}:{source_lang}-{target_lang}"

    def translate(self, texts: Sequence[str]) -> list[str | None]:
        payload = {
            "source_lang": self.source_lang,
            "target_lang": self.target_lang,
            "texts": list(texts),
        }
        try:
            resp = self._session.post(
                f"{self._base}/translate", json=payload, timeout=self._config.timeout
            )
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise TransientProviderError(f"translation endpoint unreachable: {exc}") from exc
        if resp.status_code >= 500:
            raise TransientProviderError(f"translation endpoint returned HTTP {resp.status_code}")
        if resp.status_code != 200:
            raise ProviderError(f"translation endpoint returned HTTP {resp.status_code}")
        try:
            data = resp.json()
        except ValueError as exc:
            raise ProviderError(f"translation endpoint returned invalid JSON: {exc}") from exc
        translations = data.get("translations")
        if not isinstance(translations, list) or len(translations) != len(texts):
            got = len(translations) if isinstance(translations, list) else "no"
            raise ProviderError(f"endpoint returned {got} translations for {len(texts)} texts")
        return [t if isinstance(t, str) else None for t in translations]


def embedding_provider(config: ProviderConfig, session=None):
    if config.kind == "mock":
        return MockEmbeddingProvider()
    if config.kind == "file":
        return FileEmbeddingProvider(config.file_path)
    return HttpEmbeddingProvider(config, session=session)


def sentiment_provider(config: ProviderConfig, session=None):
    if config.kind == "mock":
        return MockSentimentProvider()
    if config.kind == "file":
        return FileSentimentProvider(config.file_path)
    return HttpSentimentProvider(config, session=session)


def translation_provider(
    config: ProviderConfig, source_lang: str = "sa", target_lang: str = "en", session=None
):
    if config.kind == "mock":
        return MockTranslationProvider()
    if config.kind == "file":
        return ReplayTranslationProvider(config.file_path)
    return HttpTranslationProvider(config, source_lang, target_lang, session=session)
