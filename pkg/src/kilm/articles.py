"""Per-page parsing: markup stripping, link spans, short description."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dump import RawPage
from .errors import KilmError, NoDescriptionError
from .sentences import first_sentence
from .tokens import SPECIAL_TOKENS
from .wikitext import LinkSpan, clean_wikitext, find_description_template

SOURCE_TEMPLATE = "template"
SOURCE_FIRST_SENTENCE = "first_sentence"


@dataclass
class ParsedArticle:
    title: str
    page_id: int
    clean_text: str
    links: list[LinkSpan]
    short_description: str | None
    desc_source: str | None
    summary_end: int
    warnings: int = 0

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "page_id": self.page_id,
            "clean_text": self.clean_text,
            "links": [
                {"start": l.start, "end": l.end, "surface": l.surface, "target": l.target_title}
                for l in self.links
            ],
            "short_description": self.short_description,
            "desc_source": self.desc_source,
            "summary_end": self.summary_end,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParsedArticle":
        return cls(
            title=d["title"],
            page_id=d["page_id"],
            clean_text=d["clean_text"],
            links=[
                LinkSpan(l["start"], l["end"], l["surface"], l["target"]) for l in d["links"]
            ],
            short_description=d.get("short_description"),
            desc_source=d.get("desc_source"),
            summary_end=d["summary_end"],
        )


def extract_short_description(page: RawPage, clean_text: str) -> tuple[str, str]:
    """One-line description for the page and where it came from.

    Prefers the description template in the raw markup; otherwise falls
    back to the first sentence of the cleaned body. Raises
    :class:`NoDescriptionError` when neither yields anything usable.
    """
    template = find_description_template(page.wikitext)
    if template:
        return template, SOURCE_TEMPLATE
    return first_sentence(clean_text), SOURCE_FIRST_SENTENCE


def parse_article(page: RawPage) -> ParsedArticle:
    """Full per-page parse. Link offsets refer to the returned clean text."""
    cleaned = clean_wikitext(page.wikitext)
    for marker in SPECIAL_TOKENS:
        if marker in cleaned.clean_text:
            raise KilmError(f"page {page.title!r}: reserved marker {marker!r} in clean text")
    try:
        description, source = extract_short_description(page, cleaned.clean_text)
    except NoDescriptionError:
        description, source = None, None
    return ParsedArticle(
        title=page.title,
        page_id=page.page_id,
        clean_text=cleaned.clean_text,
        links=cleaned.links,
        short_description=description,
        desc_source=source,
        summary_end=cleaned.summary_end,
        warnings=cleaned.warnings,
    )
