"""Training-target construction: knowledge infilling and masking.

A target sequence Y carries one inserted knowledge block
``<ent> mention </ent> <ent_desc> title <sep> description </ent_desc>``
adjoining the sampled entity mention (or, in the end-placement variant,
after the whole text). Per-token labels record which loss class each
position belongs to:

    C  copy       original window tokens
    K  knowledge  title + separator + description tokens
    M  marker     the structural tokens themselves

The corrupted input X replaces the whole knowledge block with a single
mask token; span corruption of the copy region is applied separately
(see :mod:`kilm.textmask`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import KilmError, MissingKnowledgeError
from .knowledge import KnowledgeTable
from .slicing import DocumentSlice, MentionSpan
from .tokens import DESC_CLOSE, DESC_OPEN, ENT_CLOSE, ENT_OPEN, EOS_PAIR, MASK, SEP, tokenize

LABEL_COPY = "C"
LABEL_KNOWLEDGE = "K"
LABEL_MARKER = "M"

DEFAULT_MAX_LEN = 640  # cap for sequences carrying a knowledge block


class KnowledgeOverflowError(KilmError):
    """Knowledge block cannot fit the length cap even with an empty suffix."""


@dataclass
class TrainingTarget:
    tokens: list[str]
    labels: list[str]
    mention_index: int = -1  # position of the entity-open marker; -1 when plain
    truncated: bool = False

    @property
    def has_knowledge(self) -> bool:
        return LABEL_KNOWLEDGE in self.labels

    def knowledge_range(self) -> tuple[int, int]:
        """[start, end) of the knowledge block; (-1, -1) when plain."""
        try:
            start = self.labels.index(LABEL_KNOWLEDGE)
        except ValueError:
            return -1, -1
        end = start
        while end < len(self.labels) and self.labels[end] == LABEL_KNOWLEDGE:
            end += 1
        if LABEL_KNOWLEDGE in self.labels[end:]:
            raise KilmError("target has more than one knowledge block")
        return start, end


@dataclass
class CorruptedInput:
    tokens: list[str]
    maskable: list[bool]  # True where span corruption may cover a token
    knowledge_masked: bool
    k_start: int = -1  # position of the knowledge mask in tokens, -1 when absent
    k_len: int = 0  # how many target tokens that mask stands for
    infill_spans: list[tuple[int, int]] = field(default_factory=list)  # target coords


@dataclass(frozen=True)
class LossWeights:
    """Objective mix: fractions of the target covered by each span class."""

    infill_tokens: int
    knowledge_tokens: int
    total: int

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.infill_tokens, self.total) if self.total else Fraction(0)

    @property
    def beta(self) -> Fraction:
        return Fraction(self.knowledge_tokens, self.total) if self.total else Fraction(0)


def _knowledge_block(table: KnowledgeTable, entity: str) -> list[str]:
    entry = table.lookup(entity)
    if entry is None:
        raise MissingKnowledgeError(f"no description for entity {entity!r}")
    title = table.resolve(entity)
    return tokenize(title) + [SEP] + tokenize(entry.description)


def plain_target(slice_: DocumentSlice) -> TrainingTarget:
    """Target without any knowledge component (ordinary text window)."""
    return TrainingTarget(list(slice_.tokens), [LABEL_COPY] * len(slice_.tokens))


def kn_infill(
    slice_: DocumentSlice,
    mention: MentionSpan,
    table: KnowledgeTable,
    max_len: int = DEFAULT_MAX_LEN,
) -> TrainingTarget:
    """Insert the mention's knowledge block right after the mention.

    Suffix copy tokens are trimmed from the right to respect ``max_len``;
    if the sequence still overflows, :class:`KnowledgeOverflowError` is
    raised and the caller skips the sample.
    """
    knowledge = _knowledge_block(table, mention.entity)
    prefix = slice_.tokens[: mention.token_start]
    surface = slice_.tokens[mention.token_start : mention.token_end]
    suffix = slice_.tokens[mention.token_end :]

    overhead = len(prefix) + 1 + len(surface) + 2 + len(knowledge) + 1
    truncated = False
    if overhead + len(suffix) > max_len:
        keep = max_len - overhead
        if keep < 0:
            raise KnowledgeOverflowError(
                f"knowledge block for {mention.entity!r} overflows the {max_len}-token cap"
            )
        suffix = suffix[:keep]
        truncated = True

    tokens = (
        prefix
        + [ENT_OPEN]
        + surface
        + [ENT_CLOSE, DESC_OPEN]
        + knowledge
        + [DESC_CLOSE]
        + suffix
    )
    labels = (
        [LABEL_COPY] * len(prefix)
        + [LABEL_MARKER]
        + [LABEL_COPY] * len(surface)
        + [LABEL_MARKER, LABEL_MARKER]
        + [LABEL_KNOWLEDGE] * len(knowledge)
        + [LABEL_MARKER]
        + [LABEL_COPY] * len(suffix)
    )
    return TrainingTarget(tokens, labels, mention_index=len(prefix), truncated=truncated)


def kn_infill_end(
    slice_: DocumentSlice,
    mention: MentionSpan,
    table: KnowledgeTable,
    max_len: int = DEFAULT_MAX_LEN,
) -> TrainingTarget:
    """Variant placing the knowledge block after the whole text window."""
    knowledge = _knowledge_block(table, mention.entity)
    prefix = slice_.tokens[: mention.token_start]
    surface = slice_.tokens[mention.token_start : mention.token_end]
    suffix = slice_.tokens[mention.token_end :]

    overhead = len(prefix) + 1 + len(surface) + 1 + 2 + len(knowledge) + 1
    truncated = False
    if overhead + len(suffix) > max_len:
        keep = max_len - overhead
        if keep < 0:
            raise KnowledgeOverflowError(
                f"knowledge block for {mention.entity!r} overflows the {max_len}-token cap"
            )
        suffix = suffix[:keep]
        truncated = True

    tokens = (
        prefix
        + [ENT_OPEN]
        + surface
        + [ENT_CLOSE]
        + suffix
        + [EOS_PAIR, DESC_OPEN]
        + knowledge
        + [DESC_CLOSE]
    )
    labels = (
        [LABEL_COPY] * len(prefix)
        + [LABEL_MARKER]
        + [LABEL_COPY] * len(surface)
        + [LABEL_MARKER]
        + [LABEL_COPY] * len(suffix)
        + [LABEL_MARKER, LABEL_MARKER]
        + [LABEL_KNOWLEDGE] * len(knowledge)
        + [LABEL_MARKER]
    )
    return TrainingTarget(tokens, labels, mention_index=len(prefix), truncated=truncated)


def kn_mask(target: TrainingTarget) -> CorruptedInput:
    """Collapse the knowledge block to a single mask token.

    A plain target passes through unchanged with ``knowledge_masked=False``.
    """
    k_start, k_end = target.knowledge_range()
    if k_start < 0:
        return CorruptedInput(
            tokens=list(target.tokens),
            maskable=[lab == LABEL_COPY for lab in target.labels],
            knowledge_masked=False,
        )
    tokens = target.tokens[:k_start] + [MASK] + target.tokens[k_end:]
    maskable = (
        [lab == LABEL_COPY for lab in target.labels[:k_start]]
        + [False]
        + [lab == LABEL_COPY for lab in target.labels[k_end:]]
    )
    return CorruptedInput(
        tokens=tokens,
        maskable=maskable,
        knowledge_masked=True,
        k_start=k_start,
        k_len=k_end - k_start,
    )


def merge_transform(entity: str, description: str) -> list[str]:
    """Tokens of the flat sentence '<entity> is <description>.'"""
    if not entity or not description:
        raise KilmError("merge sentence needs a non-empty entity and description")
    tokens = tokenize(f"{entity} is {description}")
    if tokens[-1] not in (".", "!", "?"):
        tokens.append(".")
    return tokens


def compute_loss_weights(target: TrainingTarget, corrupted: CorruptedInput) -> LossWeights:
    """Exact span fractions of the target: infill-covered and knowledge tokens."""
    total = len(target.tokens)
    knowledge = sum(1 for lab in target.labels if lab == LABEL_KNOWLEDGE)
    covered = sum(end - start for start, end in corrupted.infill_spans)
    weights = LossWeights(covered, knowledge, total)
    if weights.alpha + weights.beta > 1:
        raise KilmError("span fractions exceed the whole sequence")
    return weights
