from .protocol import ScoreRequest, ScoreResponse, request_from_prompt
from .ngram import NGramModel, NGramScorer, ngram_score, ngram_train
from .ranking import CandidateScore, pick_winner, rank_candidates
from .client import SubprocessScorer

__all__ = [
    "ScoreRequest",
    "ScoreResponse",
    "request_from_prompt",
    "NGramModel",
    "NGramScorer",
    "ngram_score",
    "ngram_train",
    "CandidateScore",
    "pick_winner",
    "rank_candidates",
    "SubprocessScorer",
]
