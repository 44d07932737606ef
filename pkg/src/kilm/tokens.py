"""Special marker tokens and the pipeline tokenizer.

The pipeline works on whitespace-delimited word tokens with leading and
trailing punctuation split off as separate tokens. Subword tokenization is
left to whatever model eventually consumes the data; only the relative
structure of the sequences matters here.
"""

from __future__ import annotations

import unicodedata
from typing import Iterator, NamedTuple

ENT_OPEN = "<ent>"
ENT_CLOSE = "</ent>"
DESC_OPEN = "<ent_desc>"
DESC_CLOSE = "</ent_desc>"
SEP = "<sep>"
MASK = "<mask>"
EOS_PAIR = "</s></s>"

SPECIAL_TOKENS = (ENT_OPEN, ENT_CLOSE, DESC_OPEN, DESC_CLOSE, SEP, MASK, EOS_PAIR)
_SPECIAL_SET = frozenset(SPECIAL_TOKENS)


def is_special(token: str) -> bool:
    return token in _SPECIAL_SET


class Span(NamedTuple):
    """A token with its character range in the source text."""

    text: str
    start: int
    end: int


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _split_chunk(chunk: str, offset: int) -> Iterator[Span]:
    """Split one whitespace-delimited chunk into word/punctuation tokens.

    Leading and trailing punctuation characters become one-char tokens;
    punctuation inside a word (hyphens, apostrophes, abbreviation dots)
    stays attached.
    """
    lo, hi = 0, len(chunk)
    while lo < hi and _is_punct(chunk[lo]):
        lo += 1
    while hi > lo and _is_punct(chunk[hi - 1]):
        hi -= 1
    for i in range(lo):
        yield Span(chunk[i], offset + i, offset + i + 1)
    if hi > lo:
        yield Span(chunk[lo:hi], offset + lo, offset + hi)
    for i in range(hi, len(chunk)):
        yield Span(chunk[i], offset + i, offset + i + 1)


def tokenize_with_spans(text: str) -> list[Span]:
    """Tokenize, keeping the character range each token came from."""
    spans: list[Span] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        spans.extend(_split_chunk(text[i:j], i))
        i = j
    return spans


def tokenize(text: str) -> list[str]:
    """Pipeline tokens of ``text`` (see module docstring for the rules)."""
    return [s.text for s in tokenize_with_spans(text)]


def detokenize(tokens: list[str]) -> str:
    """Render a token sequence as a plain string (single spaces between tokens)."""
    return " ".join(tokens)
