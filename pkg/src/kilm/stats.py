"""Corpus statistics: entity frequencies and description-length overhead."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .knowledge import KnowledgeTable
from .slicing import DocumentSlice


@dataclass
class CorpusStats:
    entity_frequency: dict[str, int]
    slice_count: int
    mean_description_words: float
    stride: int
    insertion_overhead: float  # mean / (stride + mean), the per-sample length cost

    def to_dict(self) -> dict:
        singletons = sum(1 for c in self.entity_frequency.values() if c == 1)
        return {
            "slice_count": self.slice_count,
            "distinct_entities": len(self.entity_frequency),
            "singleton_entities": singletons,
            "mean_description_words": self.mean_description_words,
            "stride": self.stride,
            "insertion_overhead": self.insertion_overhead,
            "insertion_overhead_percent": 100.0 * self.insertion_overhead,
            "entity_frequency": dict(
                sorted(self.entity_frequency.items(), key=lambda kv: (-kv[1], kv[0]))
            ),
        }


def corpus_stats(
    slices: Iterable[DocumentSlice], table: KnowledgeTable, stride: int = 512
) -> CorpusStats:
    """Count described-entity mentions and the mean description length.

    The overhead figure estimates how much longer a window gets when one
    mean-length description is inserted into it.
    """
    freq: Counter[str] = Counter()
    slice_count = 0
    for sl in slices:
        slice_count += 1
        for mention in sl.mentions:
            canonical = table.resolve(mention.entity)
            if canonical in table.entries:
                freq[canonical] += 1
    word_counts = [len(e.description.split()) for e in table.entries.values()]
    mean_words = sum(word_counts) / len(word_counts) if word_counts else 0.0
    overhead = mean_words / (stride + mean_words) if mean_words else 0.0
    return CorpusStats(
        entity_frequency=dict(freq),
        slice_count=slice_count,
        mean_description_words=mean_words,
        stride=stride,
        insertion_overhead=overhead,
    )
