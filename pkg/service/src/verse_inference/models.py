"""Transformer backends: masked mean-pooled embeddings and sigmoid sentiment.

Both backends load a local checkpoint directory or a hub model id, run in
evaluation mode with gradients disabled, and serialize model invocation
behind a lock so concurrent requests never interleave rows.
"""

from __future__ import annotations

import threading
from typing import Sequence

import torch
from transformers import AutoModel, AutoModelForSequenceClassification, AutoTokenizer

from verse_eval.sentiment import CANONICAL_LABELS


class BackendError(RuntimeError):
    """A checkpoint cannot be served under the declared contract."""


class EmbeddingBackend:
    """Sentence embeddings: mean of the last hidden states over real tokens.

    Padding positions are excluded by the attention mask, so a text's
    vector does not depend on what it was batched with.
    """

    def __init__(self, model_path: str, max_tokens: int = 256):
        self.model_id = str(model_path)
        self._tokenizer = AutoTokenizer.from_pretrained(model_path)
        self._model = AutoModel.from_pretrained(model_path)
        self._model.eval()
        self.dim = int(self._model.config.hidden_size)
        self._max_tokens = max_tokens
        self._lock = threading.Lock()

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        with self._lock, torch.no_grad():
            enc = self._tokenizer(
                list(texts),
                padding=True,
                truncation=True,
                max_length=self._max_tokens,
                return_tensors="pt",
            )
            hidden = self._model(**enc).last_hidden_state
            mask = enc["attention_mask"].unsqueeze(-1).to(hidden.dtype)
            summed = (hidden * mask).sum(dim=1)
            counts = mask.sum(dim=1).clamp(min=1.0)
            return (summed / counts).tolist()


class SentimentBackend:
    """Multi-label sentiment probabilities: independent sigmoids, no softmax.

    The checkpoint's id2label must equal the canonical vocabulary in
    order; anything else is refused outright, because silently reindexed
    labels would corrupt every downstream table.
    """

    def __init__(self, checkpoint: str, max_tokens: int = 256):
        self.model_id = str(checkpoint)
        self._tokenizer = AutoTokenizer.from_pretrained(checkpoint)
        self._model = AutoModelForSequenceClassification.from_pretrained(checkpoint)
        self._model.eval()
        id2label = self._model.config.id2label
        order = [id2label.get(i) for i in range(len(id2label))]
        if order != list(CANONICAL_LABELS):
            raise BackendError(
                f"checkpoint {checkpoint} does not carry the canonical label order; "
                "refusing to serve sentiments from it"
            )
        self._max_tokens = max_tokens
        self._lock = threading.Lock()

    def predict(self, texts: Sequence[str]) -> list[list[float]]:
        with self._lock, torch.no_grad():
            enc = self._tokenizer(
                list(texts),
                padding=True,
                truncation=True,
                max_length=self._max_tokens,
                return_tensors="pt",
            )
            logits = self._model(**enc).logits
            return torch.sigmoid(logits).tolist()
