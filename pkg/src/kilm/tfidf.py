"""TF-IDF exemplar retrieval over a question pool.

Raw term counts, idf = ln(N/df), cosine similarity, ties broken by pool
order. Text normalization is lowercasing plus punctuation stripping; no
stemming, no stop words.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Sequence

from .prompts import QAExemplar

_WORD_RE = re.compile(r"[a-z0-9]+")


def _terms(text: str) -> Counter[str]:
    return Counter(_WORD_RE.findall(text.lower()))


class TfidfIndex:
    """Immutable index over a pool of exemplars; build once, query many."""

    def __init__(self, pool: Sequence[QAExemplar]):
        self.pool = list(pool)
        self._idf: dict[str, float] = {}
        doc_freq: Counter[str] = Counter()
        self._doc_terms = [_terms(ex.question) for ex in self.pool]
        for terms in self._doc_terms:
            doc_freq.update(terms.keys())
        n = len(self.pool)
        for term, df in doc_freq.items():
            self._idf[term] = math.log(n / df)
        self._doc_vectors = [
            {t: c * self._idf[t] for t, c in terms.items()} for terms in self._doc_terms
        ]
        self._doc_norms = [
            math.sqrt(sum(w * w for w in vec.values())) for vec in self._doc_vectors
        ]

    def similarities(self, question: str) -> list[float]:
        query = {
            t: c * self._idf[t] for t, c in _terms(question).items() if t in self._idf
        }
        q_norm = math.sqrt(sum(w * w for w in query.values()))
        sims = []
        for vec, d_norm in zip(self._doc_vectors, self._doc_norms):
            if not q_norm or not d_norm:
                sims.append(0.0)
                continue
            dot = sum(w * vec[t] for t, w in query.items() if t in vec)
            sims.append(dot / (q_norm * d_norm))
        return sims

    def retrieve(self, question: str, k: int) -> list[QAExemplar]:
        if k <= 0:
            return []
        sims = self.similarities(question)
        order = sorted(range(len(self.pool)), key=lambda i: (-sims[i], i))
        return [self.pool[i] for i in order[:k]]


def tfidf_retrieve(question: str, pool: Sequence[QAExemplar], k: int) -> list[QAExemplar]:
    """Top-k pool exemplars by TF-IDF cosine similarity to ``question``."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return TfidfIndex(pool).retrieve(question, k)
