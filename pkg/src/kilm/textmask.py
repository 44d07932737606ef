"""Span corruption of the copy region (text infilling).

Poisson-length spans of copy tokens are replaced by single mask tokens
until a fixed fraction of the copy tokens is covered; a zero-length draw
inserts a mask without consuming any token. Marker tokens and the
knowledge mask are never touched.

Eligible positions are tracked as maximal runs of uncovered copy tokens,
so span starts are drawn uniformly over all valid starts without
rescanning the sequence.
"""

from __future__ import annotations

import math
import random

from .infill import CorruptedInput
from .rng import poisson
from .tokens import MASK


def _runs_of(flags: list[bool]) -> list[list[int]]:
    """Maximal [start, length] runs of True values."""
    runs: list[list[int]] = []
    start = None
    for i, ok in enumerate(flags):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            runs.append([start, i - start])
            start = None
    if start is not None:
        runs.append([start, len(flags) - start])
    return runs


def _draw_start(runs: list[list[int]], length: int, rng: random.Random) -> int:
    """Uniform start over every position where ``length`` eligible tokens begin."""
    total = sum(r[1] - length + 1 for r in runs if r[1] >= length)
    pick = rng.randrange(total)
    for idx, (start, run_len) in enumerate(runs):
        if run_len < length:
            continue
        here = run_len - length + 1
        if pick < here:
            chosen = start + pick
            replacement = []
            if pick > 0:
                replacement.append([start, pick])
            right_len = run_len - pick - length
            if right_len > 0:
                replacement.append([chosen + length, right_len])
            runs[idx : idx + 1] = replacement
            return chosen
        pick -= here
    raise AssertionError("start drawing ran past the eligible runs")


def _draw_position(runs: list[list[int]], rng: random.Random) -> int:
    """Uniform eligible position (for zero-length insertion draws)."""
    pick = rng.randrange(sum(r[1] for r in runs))
    for start, run_len in runs:
        if pick < run_len:
            return start + pick
        pick -= run_len
    raise AssertionError("position drawing ran past the eligible runs")


def text_mask(
    corrupted: CorruptedInput,
    rng: random.Random,
    mask_prob: float = 0.3,
    poisson_lambda: float = 3.0,
) -> CorruptedInput:
    """Apply span corruption to the maskable tokens of ``corrupted``.

    The budget is ``floor(mask_prob * #maskable)`` original tokens; it is
    met exactly whenever eligible positions remain. Covered spans are
    recorded in target coordinates so weights and replays see the same
    frame as the target sequence.
    """
    if not 0 <= mask_prob < 1:
        raise ValueError(f"mask_prob must be in [0, 1), got {mask_prob}")
    if poisson_lambda <= 0:
        raise ValueError(f"poisson_lambda must be positive, got {poisson_lambda}")

    n = len(corrupted.tokens)
    runs = _runs_of(list(corrupted.maskable))
    budget = math.floor(mask_prob * sum(r[1] for r in runs))
    cover_spans: list[tuple[int, int]] = []  # (start, length) in current X coords
    insertions: list[int] = []

    while budget > 0 and runs:
        length = min(poisson(rng, poisson_lambda), budget)
        if length == 0:
            insertions.append(_draw_position(runs, rng))
            continue
        length = min(length, max(r[1] for r in runs))
        start = _draw_start(runs, length, rng)
        cover_spans.append((start, length))
        budget -= length

    def to_target(i: int) -> int:
        if corrupted.knowledge_masked and i > corrupted.k_start:
            return i + corrupted.k_len - 1
        return i

    spans_by_start: dict[int, int] = {s: l for s, l in cover_spans}
    inserts_at: dict[int, int] = {}
    for pos in insertions:
        inserts_at[pos] = inserts_at.get(pos, 0) + 1

    new_tokens: list[str] = []
    new_maskable: list[bool] = []
    new_k_start = corrupted.k_start
    i = 0
    while i < n:
        for _ in range(inserts_at.get(i, 0)):
            new_tokens.append(MASK)
            new_maskable.append(False)
        if i in spans_by_start:
            new_tokens.append(MASK)
            new_maskable.append(False)
            length = spans_by_start[i]
            # an insertion drawn before this span covered its position still lands
            for j in range(i + 1, i + length):
                for _ in range(inserts_at.get(j, 0)):
                    new_tokens.append(MASK)
                    new_maskable.append(False)
            i += length
            continue
        if i == corrupted.k_start and corrupted.knowledge_masked:
            new_k_start = len(new_tokens)
        new_tokens.append(corrupted.tokens[i])
        new_maskable.append(corrupted.maskable[i])
        i += 1

    infill_spans = sorted(
        [(to_target(s), to_target(s) + l) for s, l in cover_spans]
        + [(to_target(p), to_target(p)) for p in insertions]
    )
    return CorruptedInput(
        tokens=new_tokens,
        maskable=new_maskable,
        knowledge_masked=corrupted.knowledge_masked,
        k_start=new_k_start,
        k_len=corrupted.k_len,
        infill_spans=list(corrupted.infill_spans) + infill_spans,
    )
