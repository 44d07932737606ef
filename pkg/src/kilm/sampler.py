"""Dynamic entity selection: one mention per window per pass, no repeats
until every eligible mention of that window has been used once."""

from __future__ import annotations

from dataclasses import dataclass, field

from .knowledge import KnowledgeTable
from .rng import derive_seed
from .slicing import DocumentSlice, MentionSpan

import random


@dataclass
class EpochSampler:
    """Per-slice draw memory. Draws are deterministic functions of
    (seed, doc_id, slice_index, draw number), so results do not depend on
    how slices are partitioned across workers."""

    seed: int
    _drawn: dict[tuple[str, int], set[int]] = field(default_factory=dict)
    _draw_count: dict[tuple[str, int], int] = field(default_factory=dict)

    def draw(self, slice_: DocumentSlice, table: KnowledgeTable) -> MentionSpan | None:
        eligible = [i for i, m in enumerate(slice_.mentions) if m.entity in table]
        if not eligible:
            return None
        key = (slice_.doc_id, slice_.slice_index)
        drawn = self._drawn.setdefault(key, set())
        remaining = [i for i in eligible if i not in drawn]
        if not remaining:  # cycle complete: reset the memory
            drawn.clear()
            remaining = eligible
        count = self._draw_count.get(key, 0)
        rng = random.Random(derive_seed(self.seed, key[0], key[1], count, "entity"))
        choice = remaining[rng.randrange(len(remaining))]
        drawn.add(choice)
        self._draw_count[key] = count + 1
        return slice_.mentions[choice]


def sample_entity(
    slice_: DocumentSlice, sampler: EpochSampler, table: KnowledgeTable
) -> MentionSpan | None:
    """Uniform draw over this window's not-yet-used eligible mentions.

    Returns None when no mention has a described entity; the caller then
    emits a plain sample for the window.
    """
    return sampler.draw(slice_, table)
