"""Structured prompt construction for zero-shot probing and ranking.

Every builder produces scorer-agnostic :class:`Prompt` records. The
entity-centric builders reuse the exact infill/mask code path of the
training compiler, so prompt surfaces and training surfaces can never
drift apart.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import PromptFormatError, SpanError
from .infill import kn_infill, kn_mask
from .knowledge import KnowledgeTable
from .slicing import DocumentSlice, MentionSpan
from .tokens import DESC_CLOSE, DESC_OPEN, MASK, detokenize, tokenize_with_spans

DEFAULT_CONTEXT_WINDOW = 100  # pipeline tokens kept around an ED mention


@dataclass
class Prompt:
    instance_id: str
    encoder_text: str
    decoder_prefix: str
    continuation: str | None = None  # scoring mode
    stop_token: str | None = None  # generation mode
    max_new_tokens: int | None = None  # generation bound when no stop token
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        scoring = self.continuation is not None
        generating = self.stop_token is not None or self.max_new_tokens is not None
        if scoring == generating:
            raise PromptFormatError(
                "prompt must be either scoring (continuation) or generation "
                "(stop_token / max_new_tokens), not both or neither"
            )

    @property
    def is_scoring(self) -> bool:
        return self.continuation is not None

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "encoder_text": self.encoder_text,
            "decoder_prefix": self.decoder_prefix,
            "continuation": self.continuation,
            "stop_token": self.stop_token,
            "max_new_tokens": self.max_new_tokens,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Prompt":
        return cls(
            instance_id=d["instance_id"],
            encoder_text=d["encoder_text"],
            decoder_prefix=d["decoder_prefix"],
            continuation=d.get("continuation"),
            stop_token=d.get("stop_token"),
            max_new_tokens=d.get("max_new_tokens"),
            meta=d.get("meta") or {},
        )


@dataclass(frozen=True)
class Candidate:
    title: str
    description: str


@dataclass
class EDInstance:
    instance_id: str
    context: str
    mention_text: str
    mention_start: int
    mention_end: int
    candidates: list[Candidate]
    gold_index: int | None = None
    in_kb: bool = True

    @property
    def gold_title(self) -> str | None:
        if self.gold_index is None:
            return None
        return self.candidates[self.gold_index].title

    @classmethod
    def from_dict(cls, d: dict, instance_id: str | None = None) -> "EDInstance":
        mention = d["mention"]
        candidates = [Candidate(c["title"], c["description"]) for c in d["candidates"]]
        gold_index = None
        gold_title = d.get("gold_title")
        if gold_title is not None:
            for i, c in enumerate(candidates):
                if c.title == gold_title:
                    gold_index = i
                    break
        return cls(
            instance_id=instance_id or d.get("instance_id") or "",
            context=d["context"],
            mention_text=mention["text"],
            mention_start=mention["start"],
            mention_end=mention["end"],
            candidates=candidates,
            gold_index=gold_index,
            in_kb=bool(d.get("in_kb", gold_title is not None)),
        )


@dataclass(frozen=True)
class QAExemplar:
    question: str
    answer: str


@dataclass(frozen=True)
class ClozeInstance:
    statement_with_blank: str
    answer: str
    relation_tag: str = ""


def _mention_slice(
    context: str, start: int, end: int, surface: str, entity: str, window: int
) -> tuple[DocumentSlice, MentionSpan]:
    """A one-window pseudo-document centered on the mention."""
    if context[start:end] != surface:
        raise SpanError(
            f"mention {surface!r} not found at [{start}, {end}) of the context"
        )
    spans = tokenize_with_spans(context)
    lo = hi = -1
    for idx, tok in enumerate(spans):
        if tok.end <= start:
            continue
        if tok.start >= end:
            break
        if lo < 0:
            lo = idx
        hi = idx + 1
    if lo < 0:
        raise SpanError(f"mention {surface!r} spans no tokens")
    total = max(window, hi - lo)
    w_lo = max(0, lo - (total - (hi - lo)) // 2)
    w_hi = min(len(spans), w_lo + total)
    w_lo = max(0, w_hi - total)  # use the left side when the right runs short
    tokens = [s.text for s in spans[w_lo:w_hi]]
    mention = MentionSpan(lo - w_lo, hi - w_lo, surface, entity)
    slice_ = DocumentSlice(doc_id="context", slice_index=0, tokens=tokens, mentions=[mention])
    return slice_, mention


def _structured_parts(
    slice_: DocumentSlice, mention: MentionSpan, table: KnowledgeTable
) -> tuple[str, str, str]:
    """(encoder_text, decoder_prefix, knowledge continuation) via the
    training-side transformation."""
    target = kn_infill(slice_, mention, table)
    corrupted = kn_mask(target)
    k_start, k_end = target.knowledge_range()
    encoder_text = detokenize(corrupted.tokens)
    decoder_prefix = detokenize(corrupted.tokens[: corrupted.k_start])  # ends at <ent_desc>
    continuation = detokenize(target.tokens[k_start:k_end])
    return encoder_text, decoder_prefix, continuation


def build_ed_prompt(
    inst: EDInstance, candidate_index: int, window: int = DEFAULT_CONTEXT_WINDOW
) -> Prompt:
    """Scoring prompt for one disambiguation candidate: the masked
    structured context, with the candidate's ``title <sep> description``
    as the continuation to be scored."""
    candidate = inst.candidates[candidate_index]
    table = KnowledgeTable()
    table.add(candidate.title, candidate.description, "candidate")
    slice_, mention = _mention_slice(
        inst.context, inst.mention_start, inst.mention_end,
        inst.mention_text, candidate.title, window,
    )
    encoder_text, decoder_prefix, continuation = _structured_parts(slice_, mention, table)
    return Prompt(
        instance_id=f"{inst.instance_id}#c{candidate_index}",
        encoder_text=encoder_text,
        decoder_prefix=decoder_prefix,
        continuation=continuation,
        meta={
            "instance": inst.instance_id,
            "candidate_index": candidate_index,
            "candidate_title": candidate.title,
            "n_candidates": len(inst.candidates),
            "gold_title": inst.gold_title,
            "in_kb": inst.in_kb,
        },
    )


def build_ed_prompts(inst: EDInstance, window: int = DEFAULT_CONTEXT_WINDOW) -> list[Prompt]:
    return [build_ed_prompt(inst, i, window) for i in range(len(inst.candidates))]


def build_appositive_prompt(
    context: str,
    entity_span: tuple[int, int],
    instance_id: str = "",
    window: int = DEFAULT_CONTEXT_WINDOW,
    golds: Sequence[str] = (),
) -> Prompt:
    """Generation prompt asking for background text in the description slot."""
    start, end = entity_span
    surface = context[start:end]
    table = KnowledgeTable()
    table.add(surface or "entity", "?", "placeholder")  # masked out; never rendered
    slice_, mention = _mention_slice(context, start, end, surface, surface or "entity", window)
    encoder_text, decoder_prefix, _ = _structured_parts(slice_, mention, table)
    return Prompt(
        instance_id=instance_id,
        encoder_text=encoder_text,
        decoder_prefix=decoder_prefix,
        stop_token=DESC_CLOSE,
        meta={"golds": list(golds)} if golds else {},
    )


def build_qa_prompt(
    question: str,
    exemplars: Sequence[QAExemplar],
    instance_id: str = "",
    golds: Sequence[str] = (),
) -> Prompt:
    """Few-shot QA prompt: exemplar lines, then the test question with a
    masked answer slot. The decoder prefix runs through the final 'Answer:'."""
    lines = [f"Question: {ex.question} Answer: {ex.answer}" for ex in exemplars]
    lines.append(f"Question: {question} Answer:")
    prefix = "\n".join(lines)
    return Prompt(
        instance_id=instance_id,
        encoder_text=prefix + f" {MASK}",
        decoder_prefix=prefix,
        stop_token="\n",
        meta={"golds": list(golds)} if golds else {},
    )


def build_desc_probe(
    slice_: DocumentSlice, mention: MentionSpan, table: KnowledgeTable, instance_id: str = ""
) -> Prompt:
    """Generation prompt probing for an entity's description; the gold
    continuation rides along for exact-match / overlap scoring."""
    encoder_text, decoder_prefix, gold = _structured_parts(slice_, mention, table)
    return Prompt(
        instance_id=instance_id,
        encoder_text=encoder_text,
        decoder_prefix=decoder_prefix,
        stop_token=DESC_CLOSE,
        meta={"golds": [gold], "entity": table.resolve(mention.entity)},
    )


_BLANK_RE = re.compile(r"\[mask\]|<mask>", re.IGNORECASE)


def build_lama_cloze(
    inst: ClozeInstance, token_count: Callable[[str], int], instance_id: str = ""
) -> Prompt | None:
    """Cloze prompt with a single-token answer budget.

    Returns None (filtered) when the answer is not a single token under
    the scorer's tokenizer. Raises :class:`PromptFormatError` unless the
    statement has exactly one blank slot.
    """
    slots = _BLANK_RE.findall(inst.statement_with_blank)
    if len(slots) != 1:
        raise PromptFormatError(
            f"cloze statement needs exactly one blank, found {len(slots)}"
        )
    if token_count(inst.answer) != 1:
        return None
    statement = _BLANK_RE.sub(MASK, inst.statement_with_blank)
    prefix = statement[: statement.index(MASK)].rstrip()
    return Prompt(
        instance_id=instance_id,
        encoder_text=statement,
        decoder_prefix=prefix,
        max_new_tokens=1,
        meta={"golds": [inst.answer], "relation": inst.relation_tag},
    )
