"""Scorer wire protocol: newline-delimited JSON over a child's stdin/stdout.

Requests (one object per line):
    {"id": ..., "verb": "score", "encoder_text": ..., "decoder_prefix": ..., "continuation": ...}
    {"id": ..., "verb": "generate", "encoder_text": ..., "decoder_prefix": ...,
     "stop_token": ..., "max_new_tokens": ...}
    {"id": ..., "verb": "tokenize", "text": ...}

Responses: {"id": ..., "token_logprobs": [...]} | {"id": ..., "generated_text": ...}
         | {"id": ..., "token_count": N} | {"id": ..., "error": "..."}

Log-probabilities are natural logs. Nothing but response lines may appear
on the child's stdout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ScorerError

VERB_SCORE = "score"
VERB_GENERATE = "generate"
VERB_TOKENIZE = "tokenize"
VERBS = (VERB_SCORE, VERB_GENERATE, VERB_TOKENIZE)

DEFAULT_MAX_NEW_TOKENS = 64


@dataclass(frozen=True)
class ScoreRequest:
    id: str
    verb: str
    encoder_text: str = ""
    decoder_prefix: str = ""
    continuation: str = ""
    stop_token: str | None = None
    max_new_tokens: int | None = None
    text: str = ""

    def to_dict(self) -> dict:
        if self.verb == VERB_SCORE:
            return {
                "id": self.id,
                "verb": self.verb,
                "encoder_text": self.encoder_text,
                "decoder_prefix": self.decoder_prefix,
                "continuation": self.continuation,
            }
        if self.verb == VERB_GENERATE:
            return {
                "id": self.id,
                "verb": self.verb,
                "encoder_text": self.encoder_text,
                "decoder_prefix": self.decoder_prefix,
                "stop_token": self.stop_token,
                "max_new_tokens": self.max_new_tokens,
            }
        if self.verb == VERB_TOKENIZE:
            return {"id": self.id, "verb": self.verb, "text": self.text}
        raise ScorerError(f"unknown verb {self.verb!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "ScoreRequest":
        verb = d.get("verb")
        if verb not in VERBS:
            raise ScorerError(f"unknown verb {verb!r}")
        if "id" not in d:
            raise ScorerError("request without id")
        return cls(
            id=str(d["id"]),
            verb=verb,
            encoder_text=d.get("encoder_text", ""),
            decoder_prefix=d.get("decoder_prefix", ""),
            continuation=d.get("continuation", ""),
            stop_token=d.get("stop_token"),
            max_new_tokens=d.get("max_new_tokens"),
            text=d.get("text", ""),
        )


@dataclass
class ScoreResponse:
    id: str
    token_logprobs: list[float] | None = None
    generated_text: str | None = None
    token_count: int | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        if self.error is not None:
            return {"id": self.id, "error": self.error}
        if self.token_logprobs is not None:
            return {"id": self.id, "token_logprobs": self.token_logprobs}
        if self.generated_text is not None:
            return {"id": self.id, "generated_text": self.generated_text}
        if self.token_count is not None:
            return {"id": self.id, "token_count": self.token_count}
        raise ScorerError(f"response {self.id!r} carries no payload")

    @classmethod
    def from_dict(cls, d: dict) -> "ScoreResponse":
        if "id" not in d:
            raise ScorerError(f"response without id: {d!r}")
        return cls(
            id=str(d["id"]),
            token_logprobs=d.get("token_logprobs"),
            generated_text=d.get("generated_text"),
            token_count=d.get("token_count"),
            error=d.get("error"),
        )


def request_from_prompt(prompt, rid: str) -> ScoreRequest:
    """Build the wire request matching a Prompt's mode."""
    if prompt.is_scoring:
        return ScoreRequest(
            id=rid,
            verb=VERB_SCORE,
            encoder_text=prompt.encoder_text,
            decoder_prefix=prompt.decoder_prefix,
            continuation=prompt.continuation,
        )
    return ScoreRequest(
        id=rid,
        verb=VERB_GENERATE,
        encoder_text=prompt.encoder_text,
        decoder_prefix=prompt.decoder_prefix,
        stop_token=prompt.stop_token,
        max_new_tokens=prompt.max_new_tokens or DEFAULT_MAX_NEW_TOKENS,
    )
