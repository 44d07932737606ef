"""Fixed-stride document windows with token-indexed entity mentions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .articles import ParsedArticle
from .errors import ConfigError
from .tokens import Span, tokenize_with_spans

MODE_PRIMARY = "primary"  # lead section only
MODE_UPSCALING = "upscaling"  # whole article


@dataclass(frozen=True)
class MentionSpan:
    token_start: int
    token_end: int
    surface: str
    entity: str


@dataclass
class DocumentSlice:
    doc_id: str
    slice_index: int
    tokens: list[str]
    mentions: list[MentionSpan] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "slice_index": self.slice_index,
            "tokens": self.tokens,
            "mentions": [
                {"start": m.token_start, "end": m.token_end, "surface": m.surface, "entity": m.entity}
                for m in self.mentions
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DocumentSlice":
        return cls(
            doc_id=d["doc_id"],
            slice_index=d["slice_index"],
            tokens=d["tokens"],
            mentions=[
                MentionSpan(m["start"], m["end"], m["surface"], m["entity"])
                for m in d["mentions"]
            ],
        )


def _token_range(tokens: list[Span], char_start: int, char_end: int) -> tuple[int, int]:
    """Indices of the tokens overlapping [char_start, char_end), or (-1, -1)."""
    lo = hi = -1
    for idx, tok in enumerate(tokens):
        if tok.end <= char_start:
            continue
        if tok.start >= char_end:
            break
        if lo < 0:
            lo = idx
        hi = idx + 1
    return lo, hi


def slice_documents(
    article: ParsedArticle,
    stride: int = 512,
    mode: str = MODE_PRIMARY,
    tokenizer=tokenize_with_spans,
) -> list[DocumentSlice]:
    """Cut an article into consecutive non-overlapping windows of <= stride tokens.

    Character-offset links become token-index mentions; a mention whose
    token range crosses a window boundary is dropped from both windows.
    """
    if stride < 16:
        raise ConfigError(f"stride must be >= 16, got {stride}")
    if mode not in (MODE_PRIMARY, MODE_UPSCALING):
        raise ConfigError(f"unknown slicing mode {mode!r}")
    text = article.clean_text
    bound = article.summary_end if mode == MODE_PRIMARY else len(text)
    spans = tokenizer(text[:bound])
    mentions: list[tuple[int, int, str, str]] = []
    for link in article.links:
        if link.end > bound:
            continue
        lo, hi = _token_range(spans, link.start, link.end)
        if lo >= 0:
            mentions.append((lo, hi, link.surface, link.target_title))

    slices: list[DocumentSlice] = []
    for w, window_start in enumerate(range(0, len(spans), stride)):
        window_end = min(window_start + stride, len(spans))
        kept = [
            MentionSpan(lo - window_start, hi - window_start, surface, entity)
            for lo, hi, surface, entity in mentions
            if lo >= window_start and hi <= window_end
        ]
        slices.append(
            DocumentSlice(
                doc_id=article.title,
                slice_index=w,
                tokens=[s.text for s in spans[window_start:window_end]],
                mentions=kept,
            )
        )
    return slices
