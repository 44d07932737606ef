"""Candidate selection by continuation log-probability or perplexity."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import ScorerError
from .protocol import ScoreResponse, request_from_prompt

log = logging.getLogger(__name__)

MODE_SUM = "sum"  # argmax of the summed token log-probabilities
MODE_PERPLEXITY = "perplexity"  # argmin of length-normalized perplexity
RANKING_MODES = (MODE_SUM, MODE_PERPLEXITY)


@dataclass(frozen=True)
class CandidateScore:
    candidate_index: int
    sum_logprob: float
    mean_logprob: float
    perplexity: float
    token_count: int

    @classmethod
    def from_logprobs(cls, index: int, logprobs: Sequence[float]) -> "CandidateScore":
        count = len(logprobs)
        total = float(sum(logprobs))
        mean = total / count if count else 0.0
        return cls(
            candidate_index=index,
            sum_logprob=total,
            mean_logprob=mean,
            perplexity=math.exp(-mean),
            token_count=count,
        )


def pick_winner(scores: Sequence[CandidateScore], mode: str) -> int:
    """Winning candidate index under the given mode; ties go to the lowest index."""
    if mode == MODE_SUM:
        best = max(scores, key=lambda s: (s.sum_logprob, -s.candidate_index))
    elif mode == MODE_PERPLEXITY:
        best = min(scores, key=lambda s: (s.perplexity, s.candidate_index))
    else:
        raise ValueError(f"unknown ranking mode {mode!r}")
    return best.candidate_index


def rank_candidates(
    prompts, scorer, mode: str = MODE_PERPLEXITY
) -> tuple[int | None, list[CandidateScore]]:
    """Score every candidate prompt of one instance and pick the winner.

    Ties break toward the lowest candidate index. Any scorer failure
    leaves the instance unscored: (None, []).
    """
    if mode not in RANKING_MODES:
        raise ValueError(f"unknown ranking mode {mode!r}")
    if not prompts:
        raise ValueError("rank_candidates needs at least one prompt")
    for p in prompts:
        if not p.is_scoring:
            raise ScorerError(f"prompt {p.instance_id!r} is not a scoring prompt")
    requests = [request_from_prompt(p, rid=str(i)) for i, p in enumerate(prompts)]
    responses = scorer.run(requests)
    by_id: dict[str, ScoreResponse] = {r.id: r for r in responses}
    scores: list[CandidateScore] = []
    for i in range(len(prompts)):
        response = by_id.get(str(i))
        if response is None or response.error is not None or response.token_logprobs is None:
            detail = response.error if response else "no response"
            log.warning("instance unscored: candidate %d failed (%s)", i, detail)
            return None, []
        scores.append(CandidateScore.from_logprobs(i, response.token_logprobs))
    return pick_winner(scores, mode), scores
