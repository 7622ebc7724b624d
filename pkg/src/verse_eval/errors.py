"""Exception hierarchy. Everything raised on purpose derives from VerseEvalError."""


class VerseEvalError(Exception):
    """Base class for all toolkit errors."""


class CorpusError(VerseEvalError):
    """Corpus files missing, malformed, or violating invariants."""


class ConfigError(VerseEvalError):
    """Bad configuration file or provider configuration."""


class ProviderError(VerseEvalError):
    """A translation/embedding/sentiment provider failed or misbehaved."""


class TransientProviderError(ProviderError):
    """Transport-level provider failure that is worth retrying."""


class ValidationError(VerseEvalError):
    """Data failed an invariant check (ranges, dimensions, label order...)."""
