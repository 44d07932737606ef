"""Sentence boundary detection for the first-sentence description fallback.

Deliberately conservative: a period inside a known abbreviation, after a
single-letter initial, or inside parentheses/brackets never ends a
sentence. Good enough to cut a lead sentence out of encyclopedia prose;
not a general-purpose splitter.
"""

from __future__ import annotations

from .errors import NoDescriptionError

ABBREVIATIONS = frozenset({
    "mr", "mrs", "ms", "dr", "prof", "rev", "fr", "hon", "st", "jr", "sr",
    "gen", "rep", "sen", "gov", "lt", "col", "maj", "capt", "sgt", "pvt",
    "inc", "ltd", "co", "corp", "bros", "dept", "est", "dist", "univ",
    "vs", "etc", "al", "approx", "ca", "cf", "e.g", "i.e", "eg", "ie",
    "no", "nos", "vol", "vols", "pp", "p", "fig", "figs", "ed", "eds",
    "mt", "ft", "ave", "blvd", "rd", "hwy", "u.s", "u.k", "u.n",
    "a.m", "p.m", "b.c", "a.d", "ph.d", "b.a", "m.a", "d.c", "sep", "oct",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "nov", "dec",
})

_OPEN = {"(": ")", "[": "]"}
_CLOSE = {")", "]"}


def _word_before(text: str, i: int) -> str:
    j = i
    while j > 0 and not text[j - 1].isspace():
        j -= 1
    return text[j:i]


def _is_abbreviation(word: str) -> bool:
    w = word.rstrip(".").lstrip("(\"'").lower()
    if not w:
        return False
    if w in ABBREVIATIONS:
        return True
    # single-letter initials ("John F. Kennedy") and dotted acronyms ("U.S.")
    return len(w) == 1 or ("." in w and all(len(p) <= 1 for p in w.split(".")))


def split_sentences(text: str, limit: int | None = None) -> list[str]:
    """Split ``text`` into sentences; stop early after ``limit`` of them."""
    sentences: list[str] = []
    depth = 0
    start = 0
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth = max(0, depth - 1)
        elif ch in ".!?" and depth == 0:
            while i + 1 < n and text[i + 1] in ".!?\"'":
                i += 1
            nxt = i + 1
            if nxt >= n or text[nxt].isspace():
                follower = text[nxt:].lstrip()[:1]
                breaks = (not follower) or follower.isupper() or follower.isdigit() or follower in "\"'("
                if ch == "." and _is_abbreviation(_word_before(text, i)):
                    breaks = False
                if breaks:
                    sent = " ".join(text[start : i + 1].split())
                    if sent:
                        sentences.append(sent)
                    start = nxt
                    if limit is not None and len(sentences) >= limit:
                        return sentences
        i += 1
    tail = " ".join(text[start:].split())
    if tail:
        sentences.append(tail)
    return sentences


def first_sentence(text: str, min_words: int = 3) -> str:
    """Lead sentence of ``text``: the first of the opening two sentences
    with at least ``min_words`` words."""
    for sent in split_sentences(text, limit=2):
        if len(sent.split()) >= min_words:
            return sent
    raise NoDescriptionError("no sentence of at least %d words" % min_words)
