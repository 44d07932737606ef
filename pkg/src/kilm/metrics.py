"""Evaluation metrics: in-KB micro F1, exact match, unigram F1."""

from __future__ import annotations

import re
import string
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import MetricUndefinedError
from .knowledge import normalize_title
from .stats import CorpusStats


@dataclass(frozen=True)
class EDResult:
    instance_id: str
    predicted_title: str | None
    gold_title: str | None
    in_kb: bool
    scored: bool

    def __post_init__(self) -> None:
        if self.scored and self.predicted_title is None:
            raise ValueError(f"{self.instance_id}: scored result without a prediction")
        if not self.scored and self.predicted_title is not None:
            raise ValueError(f"{self.instance_id}: unscored result with a prediction")


@dataclass(frozen=True)
class GenResult:
    instance_id: str
    generated: str
    golds: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.golds:
            raise ValueError(f"{self.instance_id}: generation result without golds")


def inkb_micro_f1(results: Iterable[EDResult]) -> float:
    """Micro-averaged F1 over instances whose gold entity is in the KB.

    Unscored instances count toward the gold total but not the predicted
    total, so with everything scored this reduces to accuracy.
    """
    universe = [r for r in results if r.in_kb]
    if not universe:
        raise MetricUndefinedError("no in-KB gold instances")
    predicted = [r for r in universe if r.scored]
    correct = sum(
        1
        for r in predicted
        if r.gold_title is not None
        and normalize_title(r.predicted_title) == normalize_title(r.gold_title)
    )
    # harmonic mean of correct/len(predicted) and correct/len(universe),
    # computed directly so exact fractions stay exact in floats
    return 2 * correct / (len(predicted) + len(universe))


_ARTICLE_RE = re.compile(r"\b(a|an|the)\b")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def normalize_answer(text: str) -> str:
    """Lowercase, drop punctuation and articles, collapse whitespace."""
    text = text.lower().translate(_PUNCT_TABLE)
    text = _ARTICLE_RE.sub(" ", text)
    return " ".join(text.split())


def exact_match(
    result: GenResult, normalize: Callable[[str], str] = normalize_answer
) -> int:
    """1 when the generation equals any gold after normalization."""
    generated = normalize(result.generated)
    return int(any(generated == normalize(gold) for gold in result.golds))


def _bag_f1(pred: Sequence[str], gold: Sequence[str]) -> float:
    if not pred and not gold:
        return 1.0
    if not pred or not gold:
        return 0.0
    overlap = sum((Counter(pred) & Counter(gold)).values())
    return 2 * overlap / (len(pred) + len(gold))


def unigram_f1(
    result: GenResult, normalize: Callable[[str], str] = normalize_answer
) -> float:
    """Best bag-of-words overlap F1 against any gold (after normalization)."""
    pred = normalize(result.generated).split()
    return max(_bag_f1(pred, normalize(gold).split()) for gold in result.golds)


def min_frequency_filter(
    results: Sequence[EDResult], stats: CorpusStats, k: int
) -> list[EDResult]:
    """Keep instances whose gold entity was seen at least ``k`` times in
    the training corpus."""
    if k <= 0:
        return list(results)
    freq = stats.entity_frequency
    kept = []
    for r in results:
        entity = normalize_title(r.gold_title) if r.gold_title else None
        if entity is not None and freq.get(entity, 0) >= k:
            kept.append(r)
    return kept
