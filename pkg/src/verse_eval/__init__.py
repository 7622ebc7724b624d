"""Toolkit for comparing verse-aligned translations of the same work.

Pipelines: corpus ingestion and cleaning, machine-translation acquisition
with caching, multi-label sentiment agreement (Jaccard), sentence-embedding
cosine similarity, n-gram statistics, MMR keyword extraction, and a
deterministic report generator (CSV/JSON/SVG).
"""

from .acquire import (
    RateLimiter,
    TranslationCache,
    TranslationRecord,
    build_parallel_corpus,
    translate_batch,
)
from .corpus import (
    TranslationCorpus,
    Verse,
    VerseRef,
    align,
    bundled_corpus_dir,
    chapter_slice,
    clean_verse,
    load_corpus,
    save_corpus,
)
from .errors import (
    ConfigError,
    CorpusError,
    ProviderError,
    TransientProviderError,
    ValidationError,
    VerseEvalError,
)
from .providers import (
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
from .report import (
    format_cosine_cell,
    generate_report,
    ngram_csv,
    parse_cosine_cell,
    render_bars_svg,
    render_cosine_table,
    render_heatmap_svg,
    render_jaccard_table,
    similarity_csv,
    similarity_json,
)
from .semantic import (
    ChapterStats,
    EmbeddingSet,
    SimilarityRecord,
    all_chapter_stats,
    chapter_stats,
    cosine,
    embed_corpus,
    extremes,
    load_embeddings,
    mmr_keywords,
    mmr_select,
    pooled_stats,
    save_embeddings,
    verse_similarities,
)
from .sentiment import (
    CANONICAL_LABELS,
    SentimentPredictions,
    VersePrediction,
    binarize,
    chapter_jaccard,
    cooccurrence,
    cumulative_counts,
    jaccard,
    load_predictions,
    predict_corpus,
    save_predictions,
)
from .textstats import (
    default_stoplist,
    load_stoplist,
    remove_stopwords,
    sentiment_conditioned_ngrams,
    tokenize,
    top_ngrams,
)

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_LABELS",
    "MOCK_EMBED_DIM",
    "ChapterStats",
    "ConfigError",
    "CorpusError",
    "EmbeddingSet",
    "FileEmbeddingProvider",
    "FileSentimentProvider",
    "HttpEmbeddingProvider",
    "HttpSentimentProvider",
    "HttpTranslationProvider",
    "MockEmbeddingProvider",
    "MockSentimentProvider",
    "MockTranslationProvider",
    "ProviderConfig",
    "ProviderError",
    "RateLimiter",
    "ReplayTranslationProvider",
    "SentimentPredictions",
    "SimilarityRecord",
    "TransientProviderError",
    "TranslationCache",
    "TranslationCorpus",
    "TranslationRecord",
    "ValidationError",
    "Verse",
    "VerseEvalError",
    "VersePrediction",
    "VerseRef",
    "align",
    "all_chapter_stats",
    "binarize",
    "build_parallel_corpus",
    "bundled_corpus_dir",
    "chapter_jaccard",
    "chapter_slice",
    "chapter_stats",
    "clean_verse",
    "cooccurrence",
    "cosine",
    "cumulative_counts",
    "default_stoplist",
    "embed_corpus",
    "embedding_provider",
    "extremes",
    "format_cosine_cell",
    "generate_report",
    "jaccard",
    "load_corpus",
    "load_embeddings",
    "load_predictions",
    "load_stoplist",
    "mmr_keywords",
    "mmr_select",
    "ngram_csv",
    "parse_cosine_cell",
    "pooled_stats",
    "predict_corpus",
    "remove_stopwords",
    "render_bars_svg",
    "render_cosine_table",
    "render_heatmap_svg",
    "render_jaccard_table",
    "save_corpus",
    "save_embeddings",
    "save_predictions",
    "sentiment_conditioned_ngrams",
    "sentiment_provider",
    "similarity_csv",
    "similarity_json",
    "tokenize",
    "top_ngrams",
    "translate_batch",
    "translation_provider",
    "verse_similarities",
    "write_embedding_store",
    "write_sentiment_store",
]
