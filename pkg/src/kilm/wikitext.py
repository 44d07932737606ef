"""Wikitext markup stripping with offset-faithful hyperlink extraction.

The cleaner runs destructive passes first (comments, refs, templates,
tables, quote markup) and a final emit pass that renders internal links,
external links, headings and list lines while recording, for every kept
hyperlink, the exact character range it occupies in the emitted text.
Nothing may rewrite the emitted text afterwards, so the recorded spans
stay valid: ``clean_text[start:end] == surface`` always holds.

Templates are removed, not expanded; the description template is read
straight from the raw markup by :func:`find_description_template` before
the cleaner discards it.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass


@dataclass(frozen=True)
class LinkSpan:
    """A hyperlink mention: ``surface`` occupies [start, end) of the clean text."""

    start: int
    end: int
    surface: str
    target_title: str


@dataclass
class CleanedText:
    clean_text: str
    links: list[LinkSpan]
    summary_end: int  # end of the lead section (start of the first heading)
    warnings: int = 0  # malformed-markup constructs dropped


# Link targets in these namespaces are page furniture, removed outright.
_DROP_NS = {"file", "image", "media", "category"}
# Cross-namespace links that still render inline; kept as plain text.
_TEXT_NS = {
    "wikipedia", "wp", "help", "template", "portal", "user", "talk",
    "special", "draft", "mediawiki", "mos", "book", "module",
    "wikt", "wiktionary", "wikisource", "wikiquote", "commons",
    "s", "m", "w", "meta",
}
_LANG_CODE_RE = re.compile(r"^[a-z]{2,3}(-[a-z]+)?$")

_COMMENT_RE = re.compile(r"<!--.*?-->", re.DOTALL)
# Tags whose body never renders as article prose.
_DROP_TAG_RE = re.compile(
    r"<(ref|math|gallery|timeline|source|syntaxhighlight|score|hiero|imagemap|chem)"
    r"(\s[^<>]*)?>.*?</\1\s*>",
    re.DOTALL | re.IGNORECASE,
)
_SELF_CLOSING_TAG_RE = re.compile(r"<(ref|references)(\s[^<>]*)?/\s*>", re.IGNORECASE)
_BR_RE = re.compile(r"<(br|hr)(\s[^<>]*)?/?\s*>", re.IGNORECASE)
_NOWIKI_RE = re.compile(r"</?(nowiki|pre|code|poem)(\s[^<>]*)?>", re.IGNORECASE)
_TAG_RE = re.compile(r"</?[a-zA-Z][^<>\n]*?>")
_MAGIC_RE = re.compile(r"__[A-Z]+__")
_QUOTE_RE = re.compile(r"'{2,}")
_HEADING_RE = re.compile(r"^(={2,6})\s*(.*?)\s*=+\s*$")
_EXT_LINK_RE = re.compile(r"\[(?:https?|ftp|irc|gopher|mailto):[^\s\]]*(\s+[^\]]*)?\]")
_NESTED_LINK_RE = re.compile(r"\[\[(?:[^|\[\]]*\|)?([^|\[\]]*)\]\]")


def _strip_tags(text: str) -> str:
    text = _DROP_TAG_RE.sub("", text)
    text = _SELF_CLOSING_TAG_RE.sub("", text)
    text = _BR_RE.sub("\n", text)
    text = _NOWIKI_RE.sub("", text)
    return _TAG_RE.sub("", text)


def _strip_braced(text: str) -> tuple[str, int]:
    """Remove {{templates}}, {{{parameters}}} and {| tables |}, nesting-aware.

    Returns the stripped text and a count of unclosed structures (their
    content from the opener to end-of-text is dropped).
    """
    out: list[str] = []
    stack: list[str] = []  # "P" {{{parameter}}}, "T" {{template}}, "B" {| table |}
    warnings = 0
    i, n = 0, len(text)
    while i < n:
        if text[i : i + 3] == "{{{":
            stack.append("P")
            i += 3
            continue
        two = text[i : i + 2]
        if two == "{{":
            stack.append("T")
            i += 2
            continue
        if two == "{|":
            stack.append("B")
            i += 2
            continue
        if text[i : i + 3] == "}}}" and stack and stack[-1] == "P":
            stack.pop()
            i += 3
            continue
        if two == "}}" and stack and stack[-1] == "T":
            stack.pop()
            i += 2
            continue
        if two == "|}" and stack and stack[-1] == "B":
            stack.pop()
            i += 2
            continue
        if not stack:
            out.append(text[i])
        i += 1
    if stack:
        warnings += len(stack)
    return "".join(out), warnings


def _split_top_level(s: str, sep: str) -> list[str]:
    """Split on ``sep`` outside any nested [[...]]."""
    parts, depth, cur = [], 0, []
    i = 0
    while i < len(s):
        if s.startswith("[[", i):
            depth += 1
            cur.append("[[")
            i += 2
        elif s.startswith("]]", i):
            depth = max(0, depth - 1)
            cur.append("]]")
            i += 2
        elif depth == 0 and s[i] == sep:
            parts.append("".join(cur))
            cur = []
            i += 1
        else:
            cur.append(s[i])
            i += 1
    parts.append("".join(cur))
    return parts


def _render_nested(s: str) -> str:
    """Replace any nested [[...]] markup inside a surface with its display text."""
    prev = None
    while prev != s:
        prev = s
        s = _NESTED_LINK_RE.sub(lambda m: m.group(1), s)
    return s.replace("[[", "").replace("]]", "")


def _canonical_target(raw: str) -> str:
    t = raw.split("#", 1)[0].replace("_", " ").strip()
    if t.startswith(":"):
        t = t[1:].strip()
    if not t:
        return ""
    return t[0].upper() + t[1:]


def _pipe_trick(target: str) -> str:
    """Surface for an empty pipe: target minus parenthetical or comma suffix."""
    t = target.split("#", 1)[0].strip()
    if ":" in t:
        t = t.split(":", 1)[1].strip()
    m = re.match(r"^(.*?)\s*\([^()]*\)$", t)
    if m:
        return m.group(1)
    if "," in t:
        return t.split(",", 1)[0].strip()
    return t


class _Emitter:
    """Builds the clean text line by line, tracking absolute link offsets."""

    def __init__(self) -> None:
        self.done: list[str] = []
        self.length = 0
        self.links: list[LinkSpan] = []
        self._line: list[str] = []
        self._line_links: list[tuple[int, int, str, str]] = []
        self._blank_pending = False

    def text(self, s: str) -> None:
        self._line.append(s)

    def link(self, surface: str, target: str) -> None:
        rel = sum(len(p) for p in self._line)
        self._line_links.append((rel, rel + len(surface), surface, target))
        self._line.append(surface)

    def flush(self) -> None:
        content = "".join(self._line)
        stripped = content.strip()
        if not stripped:
            self._line, self._line_links = [], []
            self._blank_pending = self.length > 0
            return
        shift = len(content) - len(content.lstrip())
        if self._blank_pending:
            self.done.append("\n")
            self.length += 1
            self._blank_pending = False
        base = self.length
        for rel_s, rel_e, surface, target in self._line_links:
            self.links.append(LinkSpan(base + rel_s - shift, base + rel_e - shift, surface, target))
        self.done.append(stripped + "\n")
        self.length += len(stripped) + 1
        self._line, self._line_links = [], []

    def result(self) -> tuple[str, list[LinkSpan]]:
        return "".join(self.done), self.links


def _emit_inline(line: str, em: _Emitter) -> int:
    """Render one line's inline markup into the emitter; returns warning count."""
    warnings = 0
    i, n = 0, len(line)
    while i < n:
        if line.startswith("[[", i):
            depth, j = 1, i + 2
            while j < n and depth:
                if line.startswith("[[", j):
                    depth += 1
                    j += 2
                elif line.startswith("]]", j):
                    depth -= 1
                    j += 2
                else:
                    j += 1
            if depth:  # unbalanced: drop the marker, keep the rest literally
                warnings += 1
                i += 2
                continue
            inner = line[i + 2 : j - 2]
            i = j
            parts = _split_top_level(inner, "|")
            raw_target = parts[0].strip()
            colon = raw_target.startswith(":")
            body = raw_target[1:].strip() if colon else raw_target
            ns = body.split(":", 1)[0].strip().lower() if ":" in body else ""
            if len(parts) > 1:
                surface = _render_nested(parts[-1]).strip() or _pipe_trick(raw_target)
            else:
                surface = _render_nested(body).strip()
            if ns in _DROP_NS:
                if colon and surface:  # ":Category:X|text" renders inline
                    em.text(surface)
                continue
            if not surface:
                continue
            if ns in _TEXT_NS:
                em.text(surface)
                continue
            if ns and _LANG_CODE_RE.match(ns):
                if len(parts) > 1:
                    em.text(surface)
                continue  # unpiped interlanguage links are metadata
            target = _canonical_target(raw_target)
            if not target:
                em.text(surface)
                continue
            em.link(surface, target)
            continue
        if line[i] == "[":
            m = _EXT_LINK_RE.match(line, i)
            if m:
                label = (m.group(1) or "").strip()
                if label:
                    em.text(label)
                i = m.end()
                continue
        em.text(line[i])
        i += 1
    return warnings


def clean_wikitext(wikitext: str) -> CleanedText:
    """Strip markup, returning clean text, link spans and the lead-section end."""
    text = _COMMENT_RE.sub("", wikitext)
    text = _strip_tags(text)
    text, warnings = _strip_braced(text)
    text = html.unescape(text)
    text = _TAG_RE.sub("", text)  # tags reborn from entities; also keeps marker tokens out
    text = _MAGIC_RE.sub("", text)
    text = _QUOTE_RE.sub("", text)

    em = _Emitter()
    summary_end: int | None = None
    for line in text.split("\n"):
        heading = _HEADING_RE.match(line)
        if heading:
            em.flush()
            if summary_end is None:
                summary_end = em.length
            warnings += _emit_inline(heading.group(2), em)
            em.flush()
            continue
        stripped = line.lstrip()
        if stripped[:1] in ("*", "#", ";", ":"):
            stripped = stripped.lstrip("*#;: ")
        if stripped.startswith("|") or stripped.startswith("----"):
            stripped = ""
        warnings += _emit_inline(stripped, em)
        em.flush()
    clean, links = em.result()
    if summary_end is None:
        summary_end = len(clean)
    return CleanedText(clean, links, min(summary_end, len(clean)), warnings)


def extract_links(wikitext: str) -> tuple[str, list[LinkSpan]]:
    """Clean one page's markup; returns (clean_text, hyperlink spans)."""
    cleaned = clean_wikitext(wikitext)
    return cleaned.clean_text, cleaned.links


_DESC_TEMPLATE_RE = re.compile(r"\{\{\s*short[ _]?description\s*\|", re.IGNORECASE)


def find_description_template(wikitext: str) -> str | None:
    """Return the description template's first argument, markup-stripped.

    Returns None when the template is absent or carries a placeholder
    argument ("none").
    """
    m = _DESC_TEMPLATE_RE.search(wikitext)
    if not m:
        return None
    depth, i = 1, m.end()
    start = i
    while i < len(wikitext) and depth:
        if wikitext.startswith("{{", i):
            depth += 1
            i += 2
        elif wikitext.startswith("}}", i):
            depth -= 1
            i += 2
        else:
            i += 1
    if depth:
        return None
    body = wikitext[start : i - 2]
    arg = _split_top_level(body, "|")[0]
    cleaned = clean_wikitext(arg).clean_text
    desc = " ".join(cleaned.split())
    if not desc or desc.lower() == "none":
        return None
    return desc
