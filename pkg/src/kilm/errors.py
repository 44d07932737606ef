"""Exception types shared across the pipeline."""


class KilmError(Exception):
    """Base class for all pipeline errors."""


class DumpParseError(KilmError):
    """Malformed or truncated dump stream; carries the byte offset when known."""

    def __init__(self, message: str, byte_offset: int | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset


class NoDescriptionError(KilmError):
    """Page has neither a description template nor a usable first sentence."""


class MissingKnowledgeError(KilmError):
    """Mention entity has no entry in the knowledge table."""


class SpanError(KilmError):
    """A mention span does not match the context it claims to come from."""


class PromptFormatError(KilmError):
    """Malformed probing instance (e.g. wrong number of blank slots)."""


class ScorerError(KilmError):
    """Scorer subprocess failure or wire-protocol violation."""


class MetricUndefinedError(KilmError):
    """Metric has an empty denominator (e.g. no gold instances)."""


class ConfigError(KilmError):
    """Invalid run configuration."""
