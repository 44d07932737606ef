"""Add-delta smoothed n-gram model: the built-in reference scorer.

This scorer exists to exercise the ranking and protocol machinery at desk
scale with probabilities that can be re-derived by hand. It conditions
only on the decoder-side history and IGNORES encoder_text entirely; it is
a test oracle, not a conditional language model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import ScorerError
from .protocol import (
    DEFAULT_MAX_NEW_TOKENS,
    ScoreRequest,
    ScoreResponse,
    VERB_GENERATE,
    VERB_SCORE,
    VERB_TOKENIZE,
)

UNK = "<unk>"


@dataclass
class NGramModel:
    order: int
    delta: float
    vocabulary: list[str]
    # per context length 0..order-1: {(ctx tokens...): count} and {(ctx, token): count}
    context_counts: list[dict[tuple, int]] = field(default_factory=list)
    ngram_counts: list[dict[tuple, int]] = field(default_factory=list)

    def _lookup(self, token: str) -> str:
        return token if token in self._vocab_set else UNK

    def __post_init__(self) -> None:
        self._vocab_set = set(self.vocabulary)

    def prob(self, context: Sequence[str], token: str) -> float:
        """Smoothed P(token | context) using the longest usable context."""
        length = min(self.order - 1, len(context))
        ctx = tuple(self._lookup(t) for t in context[len(context) - length :])
        token = self._lookup(token)
        denom_extra = self.delta * (len(self.vocabulary) + 1)  # vocabulary + unknown
        count = self.ngram_counts[length].get(ctx + (token,), 0)
        total = self.context_counts[length].get(ctx, 0)
        return (count + self.delta) / (total + denom_extra)

    def logprob(self, context: Sequence[str], token: str) -> float:
        return math.log(self.prob(context, token))

    def greedy_next(self, context: Sequence[str]) -> str:
        """Most probable known token after ``context`` (ties: lexicographic)."""
        return min(self.vocabulary, key=lambda w: (-self.prob(context, w), w))


def ngram_train(corpus: Iterable[str], order: int = 2, delta: float = 1.0) -> NGramModel:
    """Count-based training over a token stream with add-delta smoothing."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    tokens = list(corpus)
    if not tokens:
        raise ScorerError("cannot train an n-gram model on an empty corpus")
    vocabulary = sorted(set(tokens))
    context_counts: list[dict[tuple, int]] = [{} for _ in range(order)]
    ngram_counts: list[dict[tuple, int]] = [{} for _ in range(order)]
    for i, token in enumerate(tokens):
        for length in range(min(order - 1, i) + 1):
            ctx = tuple(tokens[i - length : i])
            context_counts[length][ctx] = context_counts[length].get(ctx, 0) + 1
            ngram_counts[length][ctx + (token,)] = ngram_counts[length].get(ctx + (token,), 0) + 1
    return NGramModel(
        order=order,
        delta=delta,
        vocabulary=vocabulary,
        context_counts=context_counts,
        ngram_counts=ngram_counts,
    )


def ngram_score(model: NGramModel, request: ScoreRequest) -> ScoreResponse:
    """Serve one protocol request from the reference model.

    Tokenization is whitespace splitting throughout; scoring conditions on
    decoder_prefix plus the already-scored continuation tokens.
    """
    if request.verb == VERB_TOKENIZE:
        return ScoreResponse(id=request.id, token_count=len(request.text.split()))
    if request.verb == VERB_SCORE:
        history = request.decoder_prefix.split()
        logprobs = []
        for token in request.continuation.split():
            logprobs.append(model.logprob(history, token))
            history.append(token)
        return ScoreResponse(id=request.id, token_logprobs=logprobs)
    if request.verb == VERB_GENERATE:
        history = request.decoder_prefix.split()
        limit = request.max_new_tokens
        if limit is None:
            limit = DEFAULT_MAX_NEW_TOKENS
        generated: list[str] = []
        for _ in range(limit):
            token = model.greedy_next(history)
            if request.stop_token is not None and token == request.stop_token:
                break
            generated.append(token)
            history.append(token)
        return ScoreResponse(id=request.id, generated_text=" ".join(generated))
    return ScoreResponse(id=request.id, error=f"unknown verb {request.verb!r}")


class NGramScorer:
    """In-process scorer facade over :func:`ngram_score`."""

    def __init__(self, model: NGramModel):
        self.model = model

    def run(self, requests: Sequence[ScoreRequest]) -> list[ScoreResponse]:
        return [ngram_score(self.model, req) for req in requests]

    def token_count(self, text: str) -> int:
        return len(text.split())
