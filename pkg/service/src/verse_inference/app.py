"""HTTP service exposing the embedding and sentiment backends.

Wire protocol (JSON over HTTP/1.1, UTF-8):

* ``GET /v1/health`` -> ``{"status": "ok", "info": {...}}``, or 503 while
  the embedding model is not loaded
* ``POST /v1/embed {"texts": [...]}`` -> ``{"model", "dim", "vectors"}``
* ``POST /v1/sentiments {"texts": [...]}`` -> ``{"labels", "probabilities"}``

Batches are capped at 256 texts of at most 8 KiB each (400 otherwise).
Without a checkpoint carrying the canonical label order the service
answers 503 on /v1/sentiments instead of substituting another scheme.

Environment: ``EMBED_MODEL`` (embedding checkpoint or hub id),
``SENTIMENT_CHECKPOINT`` (optional sentiment checkpoint), ``INFER_PORT``.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse

from verse_eval.sentiment import CANONICAL_LABELS

from .models import EmbeddingBackend, SentimentBackend

MAX_BATCH = 256
MAX_TEXT_BYTES = 8192


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


async def _parse_texts(request: Request) -> list[str] | JSONResponse:
    try:
        body = await request.json()
    except Exception:
        return _error(400, "request body must be a JSON object")
    texts = body.get("texts") if isinstance(body, dict) else None
    if not isinstance(texts, list) or not texts:
        return _error(400, 'request body must carry a non-empty "texts" list')
    if len(texts) > MAX_BATCH:
        return _error(400, f"batch of {len(texts)} texts exceeds the cap of {MAX_BATCH}")
    for i, text in enumerate(texts):
        if not isinstance(text, str):
            return _error(400, f"texts[{i}] is not a string")
        if len(text.encode("utf-8")) > MAX_TEXT_BYTES:
            return _error(400, f"texts[{i}] exceeds {MAX_TEXT_BYTES} bytes")
    return texts


def create_app(
    embedding: EmbeddingBackend | None = None,
    sentiment: SentimentBackend | None = None,
) -> FastAPI:
    """Build the service; backends not passed in are loaded from the env."""
    if embedding is None:
        model_path = os.environ.get("EMBED_MODEL")
        if model_path:
            embedding = EmbeddingBackend(model_path)
    if sentiment is None:
        checkpoint = os.environ.get("SENTIMENT_CHECKPOINT")
        if checkpoint:
            sentiment = SentimentBackend(checkpoint)

    app = FastAPI(title="verse-inference", docs_url=None, redoc_url=None)

    @app.get("/v1/health")
    async def health():
        if embedding is None:
            return _error(503, "embedding model not loaded")
        return {
            "status": "ok",
            "info": {
                "embedding_model": embedding.model_id,
                "sentiment_model": sentiment.model_id if sentiment else None,
                "dim": embedding.dim,
                "label_order": list(CANONICAL_LABELS),
            },
        }

    @app.post("/v1/embed")
    async def embed(request: Request):
        texts = await _parse_texts(request)
        if isinstance(texts, JSONResponse):
            return texts
        if embedding is None:
            return _error(503, "embedding model not loaded")
        vectors = await run_in_threadpool(embedding.embed, texts)
        return {"model": embedding.model_id, "dim": embedding.dim, "vectors": vectors}

    @app.post("/v1/sentiments")
    async def sentiments(request: Request):
        texts = await _parse_texts(request)
        if isinstance(texts, JSONResponse):
            return texts
        if sentiment is None:
            return _error(
                503,
                "no sentiment checkpoint with the canonical label order is loaded; "
                "refusing to serve a different label scheme",
            )
        rows = await run_in_threadpool(sentiment.predict, texts)
        return {"labels": list(CANONICAL_LABELS), "probabilities": rows}

    return app
