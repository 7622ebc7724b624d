"""Mock, file-store, and HTTP providers, including retry behavior."""

import unicodedata

import pytest
import requests

from verse_eval.errors import (
    ConfigError,
    ProviderError,
    TransientProviderError,
    ValidationError,
)
from verse_eval.providers import (
    MOCK_EMBED_DIM,
    FileEmbeddingProvider,
    FileSentimentProvider,
    HttpEmbeddingProvider,
    HttpSentimentProvider,
    HttpTranslationProvider,
    MockEmbeddingProvider,
    MockSentimentProvider,
    MockTranslationProvider,
    ProviderConfig,
    ReplayTranslationProvider,
    embedding_provider,
    sentiment_provider,
    translation_provider,
    write_embedding_store,
    write_sentiment_store,
)
from verse_eval.sentiment import CANONICAL_LABELS


class StubResponse:
    def __init__(self, status_code=200, payload=None, raw_text="not json"):
        self.status_code = status_code
        self._payload = payload
        self._raw_text = raw_text

    def json(self):
        if self._payload is None:
            raise ValueError(self._raw_text)
        return self._payload


class StubSession:
    """Replays a scripted list of responses (or exceptions) in order."""

    def __init__(self, script):
        self.script = list(script)
        self.calls = []

    def _next(self, entry):
        self.calls.append(entry)
        if not self.script:
            raise AssertionError(f"unexpected request: {entry}")
        item = self.script.pop(0)
        if isinstance(item, Exception):
            raise item
        return item

    def get(self, url, timeout=None):
        return self._next(("GET", url, None))

    def post(self, url, json=None, timeout=None):
        return self._next(("POST", url, json))


def http_config(**kwargs):
    defaults = dict(kind="http", endpoint="http://svc.test", batch_size=25, max_retries=3)
    defaults.update(kwargs)
    return ProviderConfig(**defaults)


def health_response(**overrides):
    info = {
        "embedding_model": "toy-encoder",
        "sentiment_model": "toy-classifier",
        "dim": 4,
        "label_order": list(CANONICAL_LABELS),
    }
    info.update(overrides)
    return StubResponse(payload={"status": "ok", "info": info})


def test_provider_config_field_discipline():
    with pytest.raises(ConfigError):
        ProviderConfig(kind="http")  # endpoint required
    with pytest.raises(ConfigError):
        ProviderConfig(kind="file")  # file_path required
    with pytest.raises(ConfigError):
        ProviderConfig(kind="mock", endpoint="http://x")
    with pytest.raises(ConfigError):
        ProviderConfig(kind="carrier-pigeon")
    with pytest.raises(ConfigError):
        ProviderConfig(kind="mock", batch_size=0)


def test_mock_embedding_deterministic():
    provider = MockEmbeddingProvider()
    a, b = provider.embed(["alpha", "alpha"])
    assert a == b
    assert len(a) == MOCK_EMBED_DIM
    (c,) = provider.embed(["beta"])
    assert c != a
    assert all(-1.0 <= x <= 1.0 for x in a + c)
    assert any(x != 0.0 for x in a)


def test_mock_embedding_nfc_invariant():
    provider = MockEmbeddingProvider()
    composed = "café"
    decomposed = unicodedata.normalize("NFD", composed)
    assert provider.embed([composed]) == provider.embed([decomposed])


def test_mock_sentiment_lexicon_lift():
    provider = MockSentimentProvider()
    (row,) = provider.predict(["sorrow and grief fill the field"])
    assert row[CANONICAL_LABELS.index("sad")] >= 0.55
    assert all(0.05 <= p <= 0.95 for p in row)
    (neutral,) = provider.predict(["wholly unrelated tokens"])
    assert all(p < 0.5 for p in neutral)


def test_mock_translation_echoes():
    assert MockTranslationProvider().translate(["x", "y"]) == ["x", "y"]


def test_replay_provider_lookup(data_dir):
    provider = ReplayTranslationProvider(data_dir / "replay_translations.jsonl")
    assert provider.provider_id == "replay:replay_translations"
    known = (
        "mayy eva mana ādhatsva mayi buddhiṃ niveśaya "
        "nivasiṣyasi mayy eva ata ūrdhvaṃ na saṃśayaḥ"
    )
    got = provider.translate([known, "no such verse"])
    assert got[0] is not None and "mind" in got[0]
    assert got[1] is None


def test_replay_provider_missing_file(tmp_path):
    with pytest.raises(ProviderError):
        ReplayTranslationProvider(tmp_path / "absent.jsonl")


def test_file_embedding_store_roundtrip(tmp_path):
    path = tmp_path / "store.jsonl"
    write_embedding_store(path, {"alpha": [1.0, 0.0], "beta": [0.0, 1.0]}, "m", 2)
    provider = FileEmbeddingProvider(path)
    assert provider.embed(["beta", "alpha"]) == [[0.0, 1.0], [1.0, 0.0]]
    with pytest.raises(ProviderError, match="gamma"):
        provider.embed(["gamma"])


def test_file_embedding_store_rejects_bad_dim(tmp_path):
    path = tmp_path / "store.jsonl"
    write_embedding_store(path, {"alpha": [1.0, 0.0, 3.0]}, "m", 2)
    with pytest.raises(ValidationError):
        FileEmbeddingProvider(path)


def test_file_sentiment_store_roundtrip(tmp_path):
    path = tmp_path / "store.jsonl"
    row = [0.9] + [0.1] * 9
    write_sentiment_store(path, {"alpha": row})
    provider = FileSentimentProvider(path)
    assert provider.predict(["alpha"]) == [row]
    with pytest.raises(ProviderError):
        provider.predict(["beta"])


def test_file_sentiment_store_rejects_label_order(tmp_path):
    import json

    path = tmp_path / "store.jsonl"
    header = {"corpus_id": "", "threshold": 0.5, "label_order": list(reversed(CANONICAL_LABELS))}
    path.write_text(json.dumps(header) + "\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="label"):
        FileSentimentProvider(path)


def test_http_embedding_batches_and_validates():
    vec = [0.1, 0.2, 0.3, 0.4]
    session = StubSession(
        [
            health_response(),
            StubResponse(payload={"model": "toy-encoder", "dim": 4, "vectors": [vec] * 25}),
            StubResponse(payload={"model": "toy-encoder", "dim": 4, "vectors": [vec] * 5}),
        ]
    )
    provider = HttpEmbeddingProvider(http_config(), session=session)
    out = provider.embed([f"t{i}" for i in range(30)])
    assert len(out) == 30
    assert out[0] == vec
    methods = [c[0] for c in session.calls]
    assert methods == ["GET", "POST", "POST"]
    assert session.calls[1][2] == {"texts": [f"t{i}" for i in range(25)]}
    assert provider.model_id == "toy-encoder"
    assert provider.dim == 4


def test_http_embedding_rejects_dim_mismatch():
    session = StubSession(
        [
            health_response(),
            StubResponse(payload={"model": "toy", "dim": 3, "vectors": [[0.1, 0.2, 0.3]]}),
        ]
    )
    provider = HttpEmbeddingProvider(http_config(), session=session)
    with pytest.raises(ProviderError, match="dim"):
        provider.embed(["t"])


def test_http_embedding_rejects_cardinality_mismatch():
    session = StubSession(
        [
            health_response(),
            StubResponse(payload={"model": "toy", "dim": 4, "vectors": []}),
        ]
    )
    provider = HttpEmbeddingProvider(http_config(), session=session)
    with pytest.raises(ProviderError, match="vectors"):
        provider.embed(["t"])


def test_http_retries_transient_then_succeeds():
    sleeps = []
    session = StubSession([requests.ConnectionError("boom"), health_response()])
    provider = HttpEmbeddingProvider(http_config(), session=session, sleep=sleeps.append)
    assert provider.dim == 4
    assert sleeps == [0.5]


def test_http_gives_up_after_max_retries():
    sleeps = []
    session = StubSession([requests.Timeout("slow")] * 3)
    provider = HttpEmbeddingProvider(http_config(), session=session, sleep=sleeps.append)
    with pytest.raises(ProviderError, match="unreachable after 3"):
        provider.service_info()
    assert sleeps == [0.5, 1.0]


def test_http_non_200_fails_immediately():
    session = StubSession([StubResponse(status_code=400, payload={})])
    provider = HttpEmbeddingProvider(http_config(), session=session)
    with pytest.raises(ProviderError, match="400"):
        provider.service_info()
    assert len(session.calls) == 1


def test_http_invalid_json_is_an_error():
    session = StubSession([StubResponse(payload=None)])
    provider = HttpEmbeddingProvider(http_config(), session=session)
    with pytest.raises(ProviderError, match="JSON"):
        provider.service_info()


def test_http_unhealthy_service_rejected():
    session = StubSession([StubResponse(payload={"status": "loading", "info": {}})])
    provider = HttpEmbeddingProvider(http_config(), session=session)
    with pytest.raises(ProviderError, match="healthy"):
        provider.service_info()


def test_http_sentiment_refuses_label_reindex():
    shuffled = list(CANONICAL_LABELS)
    shuffled[0], shuffled[1] = shuffled[1], shuffled[0]
    session = StubSession([health_response(label_order=shuffled)])
    provider = HttpSentimentProvider(http_config(), session=session)
    with pytest.raises(ProviderError, match="refusing"):
        provider.predict(["t"])


def test_http_sentiment_happy_path():
    row = [0.1] * 10
    session = StubSession(
        [
            health_response(),
            StubResponse(
                payload={"labels": list(CANONICAL_LABELS), "probabilities": [row, row]}
            ),
        ]
    )
    provider = HttpSentimentProvider(http_config(), session=session)
    assert provider.predict(["a", "b"]) == [row, row]


def test_http_translation_error_classes():
    config = http_config()
    ok = StubResponse(payload={"translations": ["x"]})

    provider = HttpTranslationProvider(config, "sa", "en", session=StubSession([ok]))
    assert provider.translate(["s"]) == ["x"]
    assert provider.provider_id == "http:http://svc.test:sa-en"

    provider = HttpTranslationProvider(
        config, "sa", "en", session=StubSession([requests.ConnectionError("x")])
    )
    with pytest.raises(TransientProviderError):
        provider.translate(["s"])

    provider = HttpTranslationProvider(
        config, "sa", "en", session=StubSession([StubResponse(status_code=503, payload={})])
    )
    with pytest.raises(TransientProviderError):
        provider.translate(["s"])

    provider = HttpTranslationProvider(
        config, "sa", "en", session=StubSession([StubResponse(status_code=404, payload={})])
    )
    with pytest.raises(ProviderError):
        provider.translate(["s"])

    provider = HttpTranslationProvider(
        config, "sa", "en", session=StubSession([StubResponse(payload={"translations": ["a", "b"]})])
    )
    with pytest.raises(ProviderError, match="translations"):
        provider.translate(["s"])


def test_http_translation_null_entries_become_none():
    session = StubSession([StubResponse(payload={"translations": ["x", None]})])
    provider = HttpTranslationProvider(http_config(), "sa", "en", session=session)
    assert provider.translate(["a", "b"]) == ["x", None]


def test_factories_dispatch_by_kind(tmp_path, data_dir):
    assert isinstance(embedding_provider(ProviderConfig(kind="mock")), MockEmbeddingProvider)
    assert isinstance(sentiment_provider(ProviderConfig(kind="mock")), MockSentimentProvider)
    assert isinstance(translation_provider(ProviderConfig(kind="mock")), MockTranslationProvider)

    store = tmp_path / "e.jsonl"
    write_embedding_store(store, {"a": [1.0]}, "m", 1)
    config = ProviderConfig(kind="file", file_path=str(store))
    assert isinstance(embedding_provider(config), FileEmbeddingProvider)

    replay = ProviderConfig(kind="file", file_path=str(data_dir / "replay_translations.jsonl"))
    assert isinstance(translation_provider(replay), ReplayTranslationProvider)

    http = http_config()
    assert isinstance(embedding_provider(http, session=StubSession([])), HttpEmbeddingProvider)
    assert isinstance(sentiment_provider(http, session=StubSession([])), HttpSentimentProvider)
    assert isinstance(
        translation_provider(http, session=StubSession([])), HttpTranslationProvider
    )
