"""HTTP inference service: sentence embeddings and multi-label sentiment."""

from .app import MAX_BATCH, MAX_TEXT_BYTES, create_app
from .models import BackendError, EmbeddingBackend, SentimentBackend

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "EmbeddingBackend",
    "MAX_BATCH",
    "MAX_TEXT_BYTES",
    "SentimentBackend",
    "create_app",
    "__version__",
]
